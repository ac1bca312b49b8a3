#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace levytree {

/// Outcome of one experiment. `pass` is decided by the experiment itself
/// (usually statistic <= tolerance); everything needed to replay the run is
/// kept in `parameters` and `config`.
struct ExperimentReport {
  std::string name;
  /// Short statement of the result the experiment checks.
  std::string anchor;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json statistics = nlohmann::json::object();
  double statistic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string notes;
  double wall_time_s = 0.0;
  nlohmann::json config = nlohmann::json();
  /// Optional raw samples for external plotting; never part of the JSON.
  std::vector<std::string> raw_header;
  std::vector<std::vector<double>> raw_rows;

  /// Timing is excluded when `with_timing` is false, which makes the output
  /// byte-identical across replays.
  nlohmann::json to_json(bool with_timing = true) const;
  /// One-line human summary.
  std::string summary() const;
  /// Writes raw_header / raw_rows as CSV; throws if the file cannot be opened.
  void write_csv(const std::string& path) const;
};

/// Reports of a multi-part run, e.g. one per sweep value.
nlohmann::json to_json(const std::vector<ExperimentReport>& reports, bool with_timing = true);

}  // namespace levytree
