#include "levytree/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace levytree {

nlohmann::json ExperimentReport::to_json(bool with_timing) const {
  nlohmann::json j;
  j["experiment"] = name;
  j["anchor"] = anchor;
  j["seed"] = seed;
  j["workers"] = workers;
  j["parameters"] = parameters;
  j["statistics"] = statistics;
  j["statistic"] = statistic;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  if (!notes.empty()) j["notes"] = notes;
  if (!config.is_null()) j["config"] = config;
  if (with_timing) j["wall_time_s"] = wall_time_s;
  return j;
}

std::string ExperimentReport::summary() const {
  std::ostringstream out;
  out << (pass ? "PASS " : "FAIL ") << name << ": statistic " << std::setprecision(6) << statistic
      << " (tolerance " << tolerance << ")";
  return out.str();
}

void ExperimentReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (std::size_t i = 0; i < raw_header.size(); ++i) out << (i ? "," : "") << raw_header[i];
  out << "\n";
  for (const auto& row : raw_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

nlohmann::json to_json(const std::vector<ExperimentReport>& reports, bool with_timing) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json(with_timing));
  return arr;
}

}  // namespace levytree
