#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "levytree/mechanism.hpp"
#include "levytree/offspring.hpp"

namespace levytree {

/// Everything needed to reproduce one experiment run.
///
/// JSON layout (all keys except "experiment" and "seed" optional):
///   {"experiment": "ray-knight", "seed": 7, "workers": 1,
///    "offspring": "geometric", "mechanism": "limit",
///    "parameters": {"p": 500}, "tolerances": {"bias": 0.02},
///    "out": "report.json", "csv": "samples.csv"}
/// "mechanism" is "limit" (scaling limit of the offspring law),
/// "quadratic[:beta]", "stable:<index>[:<scale>]", or an object
/// {"alpha", "beta", "atoms": [[position, weight], ...], "stable": {"scale", "index"}}.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string offspring = "geometric";
  nlohmann::json mechanism = "limit";
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  std::string out;
  std::string csv;

  /// Unknown keys and ill-typed fields raise std::invalid_argument naming the field.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;

  double param(const std::string& key, double fallback) const;
  std::int64_t param_int(const std::string& key, std::int64_t fallback) const;
  std::string param_string(const std::string& key, const std::string& fallback) const;
  double tolerance(const std::string& key, double fallback) const;
};

BranchingMechanism parse_mechanism(const nlohmann::json& spec, const OffspringDistribution& offspring);

}  // namespace levytree
