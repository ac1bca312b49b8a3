#pragma once

#include <string>
#include <vector>

#include "levytree/config.hpp"
#include "levytree/report.hpp"

namespace levytree {

struct ExperimentInfo {
  std::string name;
  std::string summary;
  /// Parameters read from the config with their defaults.
  nlohmann::json defaults;
};

const std::vector<ExperimentInfo>& experiment_registry();

/// Dispatches to the named experiment. The returned report embeds the
/// config; its JSON without timing is a pure function of the config.
/// Throws std::invalid_argument for unknown experiments.
ExperimentReport run(const RunConfig& config);

}  // namespace levytree
