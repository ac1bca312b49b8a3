#include "levytree/harness.hpp"

#include <functional>
#include <stdexcept>

#include "levytree/marginals.hpp"
#include "levytree/parallel.hpp"
#include "levytree/reduced_tree.hpp"
#include "levytree/scaling.hpp"
#include "levytree/snake.hpp"

namespace levytree {

namespace {

using Runner = std::function<ExperimentReport(const RunConfig&, const RunContext&)>;

struct Entry {
  ExperimentInfo info;
  Runner runner;
};

std::vector<std::int64_t> int_list(const RunConfig& c, const std::string& key, std::vector<std::int64_t> fallback) {
  if (!c.parameters.contains(key)) return fallback;
  const auto& v = c.parameters.at(key);
  if (!v.is_array()) throw std::invalid_argument("config field 'parameters." + key + "': must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(x.get<std::int64_t>());
  return out;
}

OffspringDistribution offspring_of(const RunConfig& c) { return OffspringDistribution::from_spec(c.offspring); }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({{"feller-height", "rescaled height marginal vs |N(0,2t)| (geometric offspring)",
                  {{"p", 200}, {"t", 1.0}, {"samples", 10000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return feller_height_marginal(c.param_int("p", 200), c.param("t", 1.0),
                                                 c.param_int("samples", 10000), ctx, c.tolerance("ks", 0.05));
                 }});
    t.push_back({{"feller-trend", "KS distance of the height marginal across a sweep of p",
                  {{"ps", {50, 100, 200, 400}}, {"t", 1.0}, {"samples", 10000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return feller_height_trend(int_list(c, "ps", {50, 100, 200, 400}), c.param("t", 1.0),
                                              c.param_int("samples", 10000), ctx);
                 }});
    t.push_back({{"ray-knight", "E exp(-lam Y_[gamma_p a]/p) vs exp(-u_a(lam))",
                  {{"p", 500}, {"a", 1.0}, {"lambda", 1.0}, {"reps", 10000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return ray_knight_laplace(offspring_of(c), c.param_int("p", 500), c.param("a", 1.0),
                                             c.param("lambda", 1.0), c.param_int("reps", 10000), ctx,
                                             c.tolerance("bias", 0.02));
                 }});
    t.push_back({{"ray-knight-discrete", "occupation counts of H equal generation sizes on random forests",
                  {{"p", 50}, {"forests", 1000}, {"forest_budget", 1000000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return discrete_ray_knight_experiment(offspring_of(c), c.param_int("p", 50),
                                                         c.param_int("forests", 1000), ctx,
                                                         c.param_int("forest_budget", 1000000));
                 }});
    t.push_back({{"extinction", "g_[gamma_p a](0)^p vs exp(-v(a))", {{"p", 500}, {"a", 1.0}}},
                 [](const RunConfig& c, const RunContext&) {
                   return extinction_law(offspring_of(c), c.param_int("p", 500), c.param("a", 1.0),
                                         c.tolerance("gap", 5e-3));
                 }});
    t.push_back({{"holder", "Holder exponent of the rescaled height path vs 1 - 1/gamma",
                  {{"p", 1000}, {"paths", 8}, {"lags", 9}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return holder_exponent_estimate(offspring_of(c), c.param_int("p", 1000),
                                                   c.param_int("paths", 8), ctx,
                                                   static_cast<int>(c.param_int("lags", 9)),
                                                   c.tolerance("window", 0.15));
                 }});
    t.push_back({{"contour-gap", "0.99 quantile of |C - H| after rescaling shrinks with p",
                  {{"ps", {50, 200, 800}}, {"t", 1.0}, {"samples", 1000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return contour_height_agreement(offspring_of(c), int_list(c, "ps", {50, 200, 800}),
                                                   c.param("t", 1.0), c.param_int("samples", 1000), ctx);
                 }});
    t.push_back({{"reduced-discrete", "Laplace transform of discrete reduced counts vs the continuum law",
                  {{"p", 200}, {"T", 1.0}, {"t", 0.5}, {"lambda", 1.0}, {"samples", 4000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return discrete_reduced_crosscheck(offspring_of(c), c.param_int("p", 200), c.param("T", 1.0),
                                                      c.param("t", 0.5), c.param("lambda", 1.0),
                                                      c.param_int("samples", 4000), ctx, c.tolerance("bias", 0.03));
                 }});
    t.push_back({{"stable-marginals", "3-point skeleton frequencies of size-conditioned geometric trees",
                  {{"vertices", 2000}, {"reps", 20000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return stable_marginal_crosscheck(c.param_int("vertices", 2000), c.param_int("reps", 20000),
                                                     ctx, c.tolerance("significance", 1e-3));
                 }});
    t.push_back({{"skeleton-normalization", "stable skeleton law sums to one over all skeletons",
                  {{"p_max", 6}}},
                 [](const RunConfig& c, const RunContext&) {
                   std::vector<double> gammas{1.2, 1.5, 1.8, 2.0};
                   if (c.parameters.contains("gammas")) gammas = c.parameters.at("gammas").get<std::vector<double>>();
                   return stable_skeleton_normalization(gammas, static_cast<int>(c.param_int("p_max", 6)),
                                                        c.tolerance("sum", 1e-10));
                 }});
    t.push_back({{"poisson-tree", "offspring law and lifetimes of the Poisson-marked tree",
                  {{"lambda", 1.0}, {"trees", 100000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return poisson_tree_experiment(parse_mechanism(c.mechanism, offspring_of(c)), c.param("lambda", 1.0),
                                                  c.param_int("trees", 100000), ctx,
                                                  c.tolerance("significance", 1e-3));
                 }});
    t.push_back({{"reduced-exact", "exact reduced-tree sampler vs branch-level cdf and Laplace transform",
                  {{"T", 1.0}, {"t", 0.5}, {"lambda", 1.0}, {"samples", 100000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return reduced_exact_experiment(parse_mechanism(c.mechanism, offspring_of(c)), c.param("T", 1.0),
                                                   c.param("t", 0.5), c.param("lambda", 1.0),
                                                   c.param_int("samples", 100000), ctx, c.tolerance("ks", 0.015));
                 }});
    t.push_back({{"snake-homogeneous", "constant test function: total mass Laplace transform vs exp(-u_t(lam))",
                  {{"p", 100}, {"t", 1.0}, {"lambda", 1.0}, {"reps", 10000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return snake_homogeneous(offspring_of(c), c.param_int("p", 100), c.param("t", 1.0),
                                            c.param("lambda", 1.0), c.param_int("reps", 10000), ctx);
                 }});
    t.push_back({{"snake-laplace", "E exp(-<Z_t, lam 1_[-a,a]>) vs reaction-diffusion reference",
                  {{"p", 2000}, {"t", 0.5}, {"lambda", 1.0}, {"a", 1.0}, {"x", 0.0}, {"reps", 200}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return snake_laplace(offspring_of(c), c.param_int("p", 2000), c.param("t", 0.5),
                                        c.param("lambda", 1.0), c.param("a", 1.0), c.param("x", 0.0),
                                        c.param_int("reps", 200), ctx, c.tolerance("bias", 0.02));
                 }});
    t.push_back({{"snake-exit", "exit-measure Laplace functional vs (1/2) u'' = psi(u)",
                  {{"p", 400}, {"kernel", "lattice"}, {"R", 1.0}, {"g", 4.0}, {"x", 0.0}, {"reps", 1000}}},
                 [](const RunConfig& c, const RunContext& ctx) {
                   return snake_exit(offspring_of(c), c.param_int("p", 400),
                                     SpatialKernel::from_name(c.param_string("kernel", "lattice")), c.param("R", 1.0),
                                     c.param("g", 4.0), c.param("x", 0.0), c.param_int("reps", 1000), ctx,
                                     c.tolerance("bias", 0.03), c.tolerance("solver", 1e-6));
                 }});
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

ExperimentReport run(const RunConfig& config) {
  for (const auto& e : entries()) {
    if (e.info.name != config.experiment) continue;
    for (const auto& [key, value] : config.parameters.items()) {
      if (!e.info.defaults.contains(key) && key != "gammas") {
        throw std::invalid_argument("config field 'parameters." + key + "': not used by experiment '" +
                                    config.experiment + "'");
      }
    }
    const RunContext ctx{config.seed, config.workers == 0 ? default_workers() : config.workers};
    auto report = e.runner(config, ctx);
    report.seed = config.seed;
    report.workers = ctx.workers;
    report.config = config.to_json();
    return report;
  }
  std::string names;
  for (const auto& e : entries()) names += (names.empty() ? "" : ", ") + e.info.name;
  throw std::invalid_argument("unknown experiment '" + config.experiment + "' (known: " + names + ")");
}

}  // namespace levytree
