#include "hamflow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace hamflow {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct KeyValue {
  std::string value;
  bool used = false;
};

using Section = std::map<std::string, KeyValue>;

double parse_double(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    require(pos == raw.size() && std::isfinite(v), "");
    return v;
  } catch (...) {
    fail("config: key '", key, "' has non-numeric value '", raw, "'");
  }
}

long parse_long(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(raw, &pos);
    require(pos == raw.size(), "");
    return v;
  } catch (...) {
    fail("config: key '", key, "' has non-integer value '", raw, "'");
  }
}

class SectionReader {
 public:
  SectionReader(Section* s, std::string name)
      : section_(s), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) {
    if (!section_) return std::nullopt;
    auto it = section_->find(key);
    if (it == section_->end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  double number(const std::string& key, double fallback) {
    auto v = raw(key);
    return v ? parse_double(key, *v) : fallback;
  }

  double required_number(const std::string& key) {
    auto v = raw(key);
    require(v.has_value(), "config: section [", name_, "] is missing key '",
            key, "'");
    return parse_double(key, *v);
  }

  long integer(const std::string& key, long fallback) {
    auto v = raw(key);
    return v ? parse_long(key, *v) : fallback;
  }

  long required_integer(const std::string& key) {
    auto v = raw(key);
    require(v.has_value(), "config: section [", name_, "] is missing key '",
            key, "'");
    return parse_long(key, *v);
  }

  std::optional<double> optional_number(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_double(key, *v);
  }

  void check_all_used() const {
    if (!section_) return;
    for (const auto& [key, kv] : *section_)
      require(kv.used, "config: unknown key '", key, "' in section [", name_,
              "]");
  }

 private:
  Section* section_;
  std::string name_;
};

}  // namespace

ScenarioConfig parse_scenario_config_text(const std::string& text,
                                          const std::string& origin) {
  std::map<std::string, Section> sections;
  Section* current = nullptr;

  std::istringstream in(text);
  std::string raw_line;
  int lineno = 0;
  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = raw_line;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      require(line.back() == ']', origin, ":", lineno,
              ": malformed section header '", line, "'");
      const std::string name = trim(line.substr(1, line.size() - 2));
      require(name == "grid" || name == "scenario" || name == "tolerances",
              origin, ":", lineno, ": unknown section [", name, "]");
      current = &sections[name];
      continue;
    }

    const auto eq = line.find('=');
    require(eq != std::string::npos, origin, ":", lineno,
            ": expected 'key = value', got '", line, "'");
    require(current != nullptr, origin, ":", lineno,
            ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty() && !value.empty(), origin, ":", lineno,
            ": empty key or value");
    require(current->emplace(key, KeyValue{value}).second, origin, ":",
            lineno, ": duplicate key '", key, "'");
  }

  auto section = [&](const char* name) -> Section* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  ScenarioConfig cfg;

  SectionReader grid(section("grid"), "grid");
  require(section("grid") != nullptr, "config: missing [grid] section");
  const double T = grid.required_number("T");
  const double x_min = grid.required_number("x_min");
  const double x_max = grid.required_number("x_max");
  const long nt = grid.required_integer("nt");
  const long nx = grid.required_integer("nx");
  grid.check_all_used();
  cfg.grid = SpaceTimeGrid(T, x_min, x_max, static_cast<int>(nt),
                           static_cast<int>(nx));

  SectionReader sc(section("scenario"), "scenario");
  require(section("scenario") != nullptr,
          "config: missing [scenario] section");
  {
    auto kind = sc.raw("kind");
    require(kind.has_value(), "config: section [scenario] is missing 'kind'");
    cfg.kind = *kind;
  }
  cfg.seed = static_cast<std::uint64_t>(
      sc.integer("seed", static_cast<long>(cfg.seed)));

  if (cfg.kind == "constant_field") {
    cfg.c = sc.number("c", cfg.c);
  } else if (cfg.kind == "hamiltonian_first") {
    cfg.amplitude = sc.number("amplitude", cfg.amplitude);
    cfg.wavenumber = sc.number("wavenumber", cfg.wavenumber);
  } else if (cfg.kind == "oscillatory_n") {
    cfg.n = static_cast<int>(sc.integer("n", cfg.n));
    cfg.n_max = static_cast<int>(sc.integer("n_max", cfg.n_max));
  } else {
    require(cfg.kind == "zero_field", "config: unknown scenario kind '",
            cfg.kind, "'");
  }

  const std::string datum_kind =
      sc.raw("datum_kind").value_or("gaussian_bump");
  if (datum_kind == "gaussian_bump") {
    cfg.datum = InitialDatum::gaussian(sc.number("datum_center", 0.0),
                                       sc.number("datum_width", 0.4),
                                       sc.number("datum_height", 1.0));
  } else if (datum_kind == "constant") {
    cfg.datum = InitialDatum::constant(sc.number("datum_height", 1.0));
  } else if (datum_kind == "step") {
    cfg.datum = InitialDatum::step(sc.number("datum_center", 0.0),
                                   sc.number("datum_height", 1.0));
  } else if (datum_kind == "inv_sqrt") {
    cfg.datum = InitialDatum::inv_sqrt(sc.number("datum_center", 0.0),
                                       sc.number("datum_clip", 100.0),
                                       sc.number("datum_halfwidth", 0.5));
  } else {
    fail("config: unknown datum_kind '", datum_kind, "'");
  }
  sc.check_all_used();

  SectionReader tol(section("tolerances"), "tolerances");
  cfg.tol.continuity = tol.optional_number("continuity_tol");
  cfg.tol.slope = tol.optional_number("slope_tol");
  cfg.tol.cone = tol.optional_number("cone_tol");
  cfg.tol.inversion = tol.optional_number("inversion_tol");
  cfg.tol.ode = tol.optional_number("ode_tol");
  cfg.tol.pushforward = tol.optional_number("pushforward_tol");
  cfg.tol.weak = tol.optional_number("weak_tol");
  cfg.tol.observable = tol.optional_number("observable_tol");
  cfg.tol.mass = tol.optional_number("mass_tol");
  cfg.tol.lipschitz = tol.optional_number("lipschitz_tol");
  cfg.tol.quotient = tol.optional_number("quotient_tol");
  cfg.tol.modulus = tol.optional_number("modulus_tol");
  tol.check_all_used();

  return cfg;
}

ScenarioConfig parse_scenario_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "config: cannot read '", path, "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config_text(buf.str(), path);
}

}  // namespace hamflow
