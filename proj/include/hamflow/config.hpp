#pragma once

#include <string>

#include "hamflow/scenario.hpp"

namespace hamflow {

// Reads a scenario description from a sectioned key-value text file with
// sections [grid], [scenario] and [tolerances]. Unknown sections or keys
// are an error; the exact key set is documented in the README.
ScenarioConfig parse_scenario_config(const std::string& path);

ScenarioConfig parse_scenario_config_text(const std::string& text,
                                          const std::string& origin);

}  // namespace hamflow
