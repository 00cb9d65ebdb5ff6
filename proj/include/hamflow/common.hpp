#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace hamflow {

// Thrown on violated preconditions and failed construction invariants.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
template <class... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}
}  // namespace detail

template <class... Args>
[[noreturn]] void fail(const Args&... args) {
  throw error(detail::concat(args...));
}

template <class... Args>
void require(bool ok, const Args&... args) {
  if (!ok) fail(args...);
}

}  // namespace hamflow
