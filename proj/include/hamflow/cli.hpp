#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hamflow {

struct CliOptions {
  std::string pipeline;  // solve | flow | verify | compactness
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<int> nx, nt;          // refinement-study overrides
};

// Runs one batch pipeline. Returns 0 when every invariant suite passes,
// 1 on a suite failure, 2 on a configuration error.
int run_pipeline(const CliOptions& opt);

// Flag parsing wrapper around run_pipeline.
int cli_main(int argc, const char* const* argv);

}  // namespace hamflow
