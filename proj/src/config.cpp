#include "levytree/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace levytree {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

// nlohmann stores literals from C++ as signed, parsed text as unsigned.
bool non_negative_integer(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

template <class T>
T get_field(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    field_error(key, e.what());
  }
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  static const std::set<std::string> known{"experiment", "seed",       "workers", "offspring", "mechanism",
                                           "parameters", "tolerances", "out",     "csv"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) field_error(key, "unknown field");
  }
  RunConfig c;
  if (!j.contains("experiment")) field_error("experiment", "missing");
  c.experiment = get_field<std::string>(j, "experiment");
  if (!j.contains("seed")) field_error("seed", "missing (a master seed is mandatory)");
  if (!non_negative_integer(j.at("seed"))) field_error("seed", "must be a non-negative integer");
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) {
    if (!non_negative_integer(j.at("workers"))) field_error("workers", "must be a non-negative integer");
    c.workers = j.at("workers").get<unsigned>();
  }
  if (j.contains("offspring")) c.offspring = get_field<std::string>(j, "offspring");
  if (j.contains("mechanism")) {
    c.mechanism = j.at("mechanism");
    if (!c.mechanism.is_string() && !c.mechanism.is_object()) field_error("mechanism", "must be a string or an object");
  }
  for (const char* key : {"parameters", "tolerances"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_object()) field_error(key, "must be an object");
    (std::string(key) == "parameters" ? c.parameters : c.tolerances) = j.at(key);
  }
  for (const auto& [key, value] : c.tolerances.items()) {
    if (!value.is_number()) field_error("tolerances." + key, "must be a number");
  }
  if (j.contains("out")) c.out = get_field<std::string>(j, "out");
  if (j.contains("csv")) c.csv = get_field<std::string>(j, "csv");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"experiment", experiment}, {"seed", seed},         {"workers", workers},
                   {"offspring", offspring},   {"mechanism", mechanism}, {"parameters", parameters},
                   {"tolerances", tolerances}};
  if (!out.empty()) j["out"] = out;
  if (!csv.empty()) j["csv"] = csv;
  return j;
}

double RunConfig::param(const std::string& key, double fallback) const {
  if (!parameters.contains(key)) return fallback;
  const auto& v = parameters.at(key);
  if (!v.is_number()) field_error("parameters." + key, "must be a number");
  return v.get<double>();
}

std::int64_t RunConfig::param_int(const std::string& key, std::int64_t fallback) const {
  if (!parameters.contains(key)) return fallback;
  const auto& v = parameters.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x == std::floor(x)) return static_cast<std::int64_t>(x);
  }
  field_error("parameters." + key, "must be an integer");
}

std::string RunConfig::param_string(const std::string& key, const std::string& fallback) const {
  if (!parameters.contains(key)) return fallback;
  const auto& v = parameters.at(key);
  if (!v.is_string()) field_error("parameters." + key, "must be a string");
  return v.get<std::string>();
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
  return tolerances.contains(key) ? tolerances.at(key).get<double>() : fallback;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double to_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) field_error("mechanism", "bad number '" + text + "' in '" + spec + "'");
  return x;
}

}  // namespace

BranchingMechanism parse_mechanism(const nlohmann::json& spec, const OffspringDistribution& offspring) {
  if (spec.is_string()) {
    const auto text = spec.get<std::string>();
    const auto parts = split(text, ':');
    if (text == "limit") return limit_mechanism(offspring);
    if (parts[0] == "quadratic" && parts.size() <= 2) {
      return BranchingMechanism::quadratic(parts.size() == 2 ? to_number(parts[1], text) : 1.0);
    }
    if (parts[0] == "stable" && (parts.size() == 2 || parts.size() == 3)) {
      const double index = to_number(parts[1], text);
      const double scale = parts.size() == 3 ? to_number(parts[2], text) : 1.0;
      return BranchingMechanism::stable(scale, index);
    }
    field_error("mechanism", "unknown form '" + text + "'");
  }
  if (!spec.is_object()) field_error("mechanism", "must be a string or an object");
  for (const auto& [key, value] : spec.items()) {
    if (key != "alpha" && key != "beta" && key != "atoms" && key != "stable") {
      field_error("mechanism." + key, "unknown field");
    }
  }
  const double alpha = spec.value("alpha", 0.0);
  const double beta = spec.value("beta", 0.0);
  std::vector<LevyAtom> atoms;
  if (spec.contains("atoms")) {
    for (const auto& a : spec.at("atoms")) {
      if (!a.is_array() || a.size() != 2) field_error("mechanism.atoms", "entries must be [position, weight]");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  }
  std::optional<StableTail> stable;
  if (spec.contains("stable")) {
    const auto& s = spec.at("stable");
    if (!s.contains("index")) field_error("mechanism.stable.index", "missing");
    stable = StableTail{s.value("scale", 1.0), s.at("index").get<double>()};
  }
  return BranchingMechanism(alpha, beta, std::move(atoms), stable);
}

}  // namespace levytree
