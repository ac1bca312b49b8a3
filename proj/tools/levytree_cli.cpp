// Command-line front end: CSBP evaluation, coding round trips, Galton-Watson
// sampling and the experiment harness.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "levytree/codings.hpp"
#include "levytree/config.hpp"
#include "levytree/csbp.hpp"
#include "levytree/gw.hpp"
#include "levytree/harness.hpp"
#include "levytree/rng.hpp"

using namespace levytree;
using nlohmann::json;

namespace {

json parse_param_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;  // bare strings such as lattice
  }
}

int run_csbp(const std::string& mech_spec, const std::string& offspring, double t, double lam) {
  const auto m = parse_mechanism(parse_param_value(mech_spec), OffspringDistribution::from_spec(offspring));
  const CsbpKernel k(m);
  json out{{"mechanism", m.describe()}, {"t", t}, {"lambda", lam}, {"psi", m.psi(lam)},
           {"u", k.u(t, lam)}, {"grey", m.grey_condition()}, {"sheu", m.sheu_condition()}};
  if (m.grey_condition() && t > 0.0) out["v"] = k.v(t);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_roundtrip(const std::string& tree_text, std::int64_t random_trees, std::uint64_t seed) {
  std::vector<OrderedTree> trees;
  if (!tree_text.empty()) trees.push_back(OrderedTree::parse(tree_text));
  auto rng = make_stream(seed, 0);
  const auto d = OffspringDistribution::geometric_half();
  std::int64_t redraws = 0;
  while (static_cast<std::int64_t>(trees.size()) < random_trees + (tree_text.empty() ? 0 : 1)) {
    try {
      trees.push_back(sample_tree(d, rng, 1'000'000));
    } catch (const NodeBudgetExceeded&) {
      ++redraws;  // heavy tail of the critical size law; any tree exercises the bijections
    }
  }
  std::int64_t failures = 0;
  for (const auto& tree : trees) {
    const auto walk = lukasiewicz_of(tree);
    const auto h = height_of(tree);
    const bool ok = walk_to_forest(walk) == Forest{tree} && OrderedTree::from_height(h) == tree &&
                    height_from_walk(walk) == h && contour_of(tree) == contour_from_height(h);
    if (!ok) ++failures;
    if (trees.size() == 1) {
      std::cout << json{{"tree", tree.to_string()}, {"height", h}, {"walk", walk},
                        {"contour", contour_of(tree)}, {"ok", ok}}
                       .dump(2)
                << "\n";
    }
  }
  if (trees.size() != 1) std::cout << json{{"trees", trees.size()}, {"failures", failures}, {"redraws", redraws}}.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}

int run_simulate(const std::string& offspring, std::int64_t count, std::uint64_t seed,
                 std::int32_t min_height, std::int64_t size) {
  const auto d = OffspringDistribution::from_spec(offspring);
  auto rng = make_stream(seed, 0);
  for (std::int64_t i = 0; i < count; ++i) {
    OrderedTree t;
    if (size > 0) {
      t = sample_conditioned_size(d, size, rng).tree;
    } else if (min_height > 0) {
      t = sample_conditioned_height(d, min_height, rng).tree;
    } else {
      t = sample_tree(d, rng);
    }
    std::cout << t.to_string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levytree: Galton-Watson trees, CSBP numerics and scaling-limit experiments"};
  app.require_subcommand(1);

  auto* csbp = app.add_subcommand("csbp", "CSBP numerics");
  auto* csbp_eval = csbp->add_subcommand("eval", "evaluate psi, u_t(lambda) and v(t)");
  csbp->require_subcommand(1);
  std::string mech = "quadratic", csbp_offspring = "geometric";
  double csbp_t = 1.0, csbp_lam = 1.0;
  csbp_eval->add_option("--mechanism", mech, "limit | quadratic[:beta] | stable:<index>[:<scale>] | JSON object");
  csbp_eval->add_option("--offspring", csbp_offspring, "offspring law used by --mechanism limit");
  csbp_eval->add_option("--t", csbp_t, "time");
  csbp_eval->add_option("--lambda", csbp_lam, "Laplace argument");

  auto* codings = app.add_subcommand("codings", "tree codings");
  auto* roundtrip = codings->add_subcommand("roundtrip", "check walk/height/contour bijections");
  codings->require_subcommand(1);
  std::string tree_text;
  std::int64_t random_trees = 0;
  std::uint64_t rt_seed = 1;
  roundtrip->add_option("--tree", tree_text, "child counts in lexicographic order, e.g. 2,3,0,2,0,0,0,0");
  roundtrip->add_option("--random", random_trees, "also check this many random geometric trees");
  roundtrip->add_option("--seed", rt_seed, "master seed");

  auto* simulate = app.add_subcommand("simulate", "sampling");
  auto* sim_gw = simulate->add_subcommand("gw", "print Galton-Watson trees as child-count strings");
  simulate->require_subcommand(1);
  std::string sim_offspring = "geometric";
  std::int64_t sim_count = 1, sim_size = 0;
  std::int32_t sim_height = 0;
  std::uint64_t sim_seed = 1;
  sim_gw->add_option("--offspring", sim_offspring, "geometric | stable:<gamma> | custom:<csv>");
  sim_gw->add_option("--count", sim_count, "number of trees");
  sim_gw->add_option("--seed", sim_seed, "master seed");
  sim_gw->add_option("--min-height", sim_height, "condition on height >= n");
  sim_gw->add_option("--size", sim_size, "condition on exactly n vertices");

  auto* experiment = app.add_subcommand("experiment", "run a registered experiment");
  std::string exp_name, config_path, out_path, csv_path, exp_offspring, exp_mechanism;
  std::optional<std::uint64_t> exp_seed;
  std::optional<unsigned> exp_workers;
  std::optional<double> opt_p, opt_t, opt_samples;
  std::vector<std::string> extra;
  bool list = false;
  experiment->add_option("name", exp_name, "experiment name");
  experiment->add_flag("--list", list, "list experiments and their parameters");
  experiment->add_option("--config", config_path, "JSON run configuration");
  experiment->add_option("--seed", exp_seed, "master seed (mandatory unless in the config)");
  experiment->add_option("--workers", exp_workers, "worker threads (0 = hardware concurrency)");
  experiment->add_option("--out", out_path, "write the JSON report here");
  experiment->add_option("--csv", csv_path, "write raw samples as CSV");
  experiment->add_option("--offspring", exp_offspring, "offspring law");
  experiment->add_option("--mechanism", exp_mechanism, "branching mechanism");
  experiment->add_option("--p", opt_p, "population scale");
  experiment->add_option("--t", opt_t, "time");
  experiment->add_option("--samples", opt_samples, "Monte Carlo sample count");
  experiment->add_option("--param", extra, "extra parameter key=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (csbp_eval->parsed()) return run_csbp(mech, csbp_offspring, csbp_t, csbp_lam);
    if (roundtrip->parsed()) return run_roundtrip(tree_text, random_trees, rt_seed);
    if (sim_gw->parsed()) return run_simulate(sim_offspring, sim_count, sim_seed, sim_height, sim_size);
    if (experiment->parsed()) {
      if (list) {
        for (const auto& e : experiment_registry()) {
          std::cout << e.name << "\n  " << e.summary << "\n  defaults: " << e.defaults.dump() << "\n";
        }
        return 0;
      }
      json cfg_json = config_path.empty() ? json::object() : RunConfig::load(config_path).to_json();
      if (!exp_name.empty()) cfg_json["experiment"] = exp_name;
      if (exp_seed) cfg_json["seed"] = *exp_seed;
      if (exp_workers) cfg_json["workers"] = *exp_workers;
      if (!out_path.empty()) cfg_json["out"] = out_path;
      if (!csv_path.empty()) cfg_json["csv"] = csv_path;
      if (!exp_offspring.empty()) cfg_json["offspring"] = exp_offspring;
      if (!exp_mechanism.empty()) cfg_json["mechanism"] = parse_param_value(exp_mechanism);
      auto& params = cfg_json["parameters"];
      if (params.is_null()) params = json::object();
      auto set_number = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        if (*v == std::floor(*v)) {
          params[key] = static_cast<std::int64_t>(*v);
        } else {
          params[key] = *v;
        }
      };
      set_number("p", opt_p);
      set_number("t", opt_t);
      set_number("samples", opt_samples);
      for (const auto& kv : extra) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        params[kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
      }
      const auto cfg = RunConfig::from_json(cfg_json);
      const auto report = run(cfg);
      const auto text = report.to_json().dump(2);
      if (!cfg.out.empty()) {
        std::ofstream out(cfg.out);
        if (!out) throw std::runtime_error("cannot open '" + cfg.out + "' for writing");
        out << text << "\n";
      }
      if (!cfg.csv.empty()) report.write_csv(cfg.csv);
      std::cout << text << "\n";
      std::cerr << report.summary() << "\n";
      return report.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
