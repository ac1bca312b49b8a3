#include "levytree/reduced_tree.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "levytree/codings.hpp"
#include "levytree/gw.hpp"
#include "levytree/numerics.hpp"
#include "levytree/stats.hpp"

namespace levytree {

std::int64_t ReducedTreeNode::count_at(double t) const {
  if (t < birth) return 0;
  if (t < branch) return 1;
  if (!expanded) throw std::logic_error("ReducedTreeNode::count_at: level beyond the sampled resolution");
  std::int64_t n = 0;
  for (const auto& c : children) n += c.count_at(t);
  return n;
}

nlohmann::json ReducedTreeNode::to_json() const {
  nlohmann::json j{{"birth", birth}, {"branch", branch}, {"expanded", expanded}};
  if (expanded) {
    auto arr = nlohmann::json::array();
    for (const auto& c : children) arr.push_back(c.to_json());
    j["children"] = std::move(arr);
  }
  return j;
}

ReducedTreeSampler::ReducedTreeSampler(BranchingMechanism m) : kernel_(std::move(m)) {
  if (!kernel_.mechanism().grey_condition()) {
    throw std::domain_error("reduced tree: the Grey condition fails, v is infinite");
  }
  const auto& mech = kernel_.mechanism();
  if (mech.is_pure_stable() || mech.is_pure_quadratic()) {
    scale_free_law_ = derivative_series_pmf(mech, 1.0, mech.theta(1.0), 0.0);
  }
}

double ReducedTreeSampler::branch_survival(double T, double t) const {
  if (!(t >= 0.0 && t < T)) throw std::domain_error("branch_survival: need 0 <= t < T");
  const auto& m = kernel_.mechanism();
  return m.psi_tilde(kernel_.v(T)) / m.psi_tilde(kernel_.v(T - t));
}

double ReducedTreeSampler::sample_branch_time(double T, std::mt19937_64& rng) const {
  const auto& m = kernel_.mechanism();
  const double y0 = kernel_.v(T);
  // Survival W is uniform on (0,1]; solve psi_tilde(y) = psi_tilde(v(T)) / W for y = v(T - t).
  const double w = 1.0 - std::generate_canonical<double, 53>(rng);
  const double target = m.psi_tilde(y0) / w;
  if (w == 1.0) return 0.0;
  double hi = 2.0 * y0;
  while (m.psi_tilde(hi) < target) {
    hi *= 2.0;
    if (!std::isfinite(hi)) return T;
  }
  const double y = numerics::bracketed_newton(
      [&](double x) { return std::pair{m.psi_tilde(x) - target, m.theta(x) / x}; }, y0, hi,
      0.5 * (y0 + hi), 1e-14);
  const double t = T - kernel_.v_inverse(y);
  return std::clamp(t, 0.0, T);
}

SeriesPmf ReducedTreeSampler::offspring_pmf(double T, double t) const {
  if (!(t >= 0.0 && t < T)) throw std::domain_error("offspring_pmf: need 0 <= t < T");
  if (scale_free_law_) return *scale_free_law_;
  const auto& m = kernel_.mechanism();
  const double u = kernel_.v(T - t);
  const double th = m.theta(u);
  if (!(th > 0.0)) throw std::domain_error("reduced tree: theta(U) vanishes, offspring law undefined");
  return derivative_series_pmf(m, u, th, 0.0);
}

void ReducedTreeSampler::grow(ReducedTreeNode& node, double T, double resolve_until,
                              std::mt19937_64& rng) const {
  const double horizon = T - node.birth;
  const double tau = sample_branch_time(horizon, rng);
  node.branch = node.birth + tau;
  if (node.branch > resolve_until || tau >= horizon) {
    node.expanded = false;
    return;
  }
  const auto k = scale_free_law_ ? scale_free_law_->sample(rng) : offspring_pmf(horizon, tau).sample(rng);
  node.expanded = true;
  node.children.resize(static_cast<std::size_t>(k));
  for (auto& c : node.children) {
    c.birth = node.branch;
    grow(c, T, resolve_until, rng);
  }
}

ReducedTreeNode ReducedTreeSampler::sample(double T, double start_level, double resolve_until,
                                           std::mt19937_64& rng) const {
  if (!(start_level < T)) throw std::domain_error("reduced tree: start level must lie below T");
  if (!(resolve_until < T)) throw std::domain_error("reduced tree: resolution level must lie below T");
  ReducedTreeNode root;
  root.birth = start_level;
  grow(root, T, resolve_until, rng);
  return root;
}

double reduced_marginal_laplace(const BranchingMechanism& m, double T, double t, double lam) {
  if (!(t >= 0.0 && t < T)) throw std::domain_error("reduced_marginal_laplace: need 0 <= t < T");
  const CsbpKernel k(m);
  return 1.0 - k.u(t, -std::expm1(-lam) * k.v(T - t)) / k.v(T);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ExperimentReport reduced_exact_experiment(const BranchingMechanism& m, double T, double t,
                                          double lam, std::int64_t n_samples, const RunContext& ctx,
                                          double ks_tolerance) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.name = "reduced-exact";
  r.anchor = "reduced tree: branch level law, offspring law and Laplace transform of Z^T_t";
  r.seed = ctx.seed;
  r.workers = ctx.workers;
  const ReducedTreeSampler sampler(m);
  struct Chunk {
    std::vector<double> branch;
    Moments laplace;
  };
  const auto chunks = run_chunked<Chunk>(n_samples, 1000, ctx.seed, ctx.workers,
                                         [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Chunk c;
    for (auto i = b; i < e; ++i) {
      const auto tree = sampler.sample(T, 0.0, t, rng);
      c.branch.push_back(tree.branch);
      c.laplace.add(std::exp(-lam * static_cast<double>(tree.count_at(t))));
    }
    return c;
  });
  std::vector<double> branch;
  Moments lap;
  for (const auto& c : chunks) {
    branch.insert(branch.end(), c.branch.begin(), c.branch.end());
    lap.merge(c.laplace);
  }
  const double ks = ks_statistic(branch, [&](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= T) return 1.0;
    return 1.0 - sampler.branch_survival(T, s);
  });
  const double target = reduced_marginal_laplace(m, T, t, lam);
  const double gap = std::abs(lap.mean() - target);
  const double p1 = t < T ? sampler.offspring_pmf(T, t).pmf(1) : 0.0;
  r.parameters = {{"mechanism", m.describe()}, {"T", T}, {"t", t}, {"lambda", lam}, {"samples", n_samples}};
  r.statistics = {{"branch_ks", ks}, {"laplace_estimate", lap.mean()}, {"laplace_se", lap.standard_error()},
                  {"laplace_target", target}, {"laplace_gap", gap}, {"offspring_p1", p1}};
  r.statistic = gap;
  r.tolerance = 3.0 * lap.standard_error();
  r.pass = gap <= r.tolerance && ks <= ks_tolerance && p1 == 0.0;
  r.notes = "pass requires branch-level KS <= " + std::to_string(ks_tolerance) + " and Laplace gap within 3 SE";
  r.wall_time_s = seconds_since(start);
  return r;
}

ExperimentReport discrete_reduced_crosscheck(const OffspringDistribution& d, std::int64_t p,
                                             double T, double t, double lam,
                                             std::int64_t n_samples, const RunContext& ctx,
                                             double bias) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.name = "reduced-discrete";
  r.anchor = "excursions of H above [gamma_p t] hitting [gamma_p T] converge to the reduced tree";
  r.seed = ctx.seed;
  r.workers = ctx.workers;
  const auto plan = rescaling_plan(d, p);
  const auto top = static_cast<std::int32_t>(std::floor(static_cast<double>(plan.gamma_p) * T));
  const auto level = static_cast<std::int32_t>(std::floor(static_cast<double>(plan.gamma_p) * t));
  struct Chunk {
    Moments laplace;
    std::int64_t mismatches = 0;
    std::int64_t attempts = 0;
  };
  const auto chunks = run_chunked<Chunk>(n_samples, 100, ctx.seed, ctx.workers,
                                         [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Chunk c;
    for (auto i = b; i < e; ++i) {
      const auto s = sample_conditioned_height(d, top, rng, true);
      c.attempts += s.attempts;
      const auto z = reduced_counts(s.tree, top)[static_cast<std::size_t>(level)];
      const auto h = height_of(s.tree);
      if (excursion_count_above(h, level, top) != z) ++c.mismatches;
      c.laplace.add(std::exp(-lam * static_cast<double>(z)));
    }
    return c;
  });
  Chunk total;
  for (const auto& c : chunks) {
    total.laplace.merge(c.laplace);
    total.mismatches += c.mismatches;
    total.attempts += c.attempts;
  }
  const auto mech = limit_mechanism(d);
  const double target = reduced_marginal_laplace(mech, T, t, lam);
  const double gap = std::abs(total.laplace.mean() - target);
  r.parameters = {{"offspring", d.spec()}, {"mechanism", mech.describe()}, {"p", p},
                  {"gamma_p", plan.gamma_p}, {"T", T}, {"t", t}, {"lambda", lam}, {"samples", n_samples}};
  r.statistics = {{"estimate", total.laplace.mean()}, {"se", total.laplace.standard_error()},
                  {"target", target}, {"gap", gap}, {"coding_mismatches", total.mismatches},
                  {"acceptance_rate", static_cast<double>(n_samples) / static_cast<double>(total.attempts)}};
  r.statistic = gap;
  r.tolerance = 3.0 * total.laplace.standard_error() + bias;
  r.pass = gap <= r.tolerance && total.mismatches == 0;
  r.wall_time_s = seconds_since(start);
  return r;
}

}  // namespace levytree
