#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "json.hpp"
#include "levytree/csbp.hpp"
#include "levytree/offspring.hpp"
#include "levytree/parallel.hpp"
#include "levytree/report.hpp"
#include "levytree/series_pmf.hpp"

namespace levytree {

/// One branch of the reduced tree: it starts at `birth` and splits at
/// `branch` into children.size() >= 2 branches. Branches whose split lies
/// beyond the resolution level are left unexpanded.
struct ReducedTreeNode {
  double birth = 0.0;
  double branch = 0.0;
  bool expanded = false;
  std::vector<ReducedTreeNode> children;

  /// Number of branches alive at level t (birth <= t < branch).
  std::int64_t count_at(double t) const;
  nlohmann::json to_json() const;
};

/// Sampler for the tree of lineages that survive to level T, under the
/// excursion measure conditioned on height > T.
class ReducedTreeSampler {
 public:
  explicit ReducedTreeSampler(BranchingMechanism m);

  const CsbpKernel& kernel() const { return kernel_; }

  /// N_(T)[gamma_T > t] = psi_tilde(v(T)) / psi_tilde(v(T - t)), 0 <= t < T.
  double branch_survival(double T, double t) const;
  /// Level of the first branch point, by exact inversion of the survival function.
  double sample_branch_time(double T, std::mt19937_64& rng) const;
  /// Offspring law at a branch point with U = v(T - t):
  /// P[k] = U^{k-1} |psi^{(k)}(U)| / (k! theta(U)), k >= 2.
  SeriesPmf offspring_pmf(double T, double t) const;

  /// Reduced tree with horizon T started at `start_level`; splits above
  /// `resolve_until` are not expanded. Requires resolve_until < T.
  ReducedTreeNode sample(double T, double start_level, double resolve_until,
                         std::mt19937_64& rng) const;

 private:
  void grow(ReducedTreeNode& node, double T, double resolve_until, std::mt19937_64& rng) const;

  CsbpKernel kernel_;
  // Pure stable and pure quadratic laws do not depend on U; built once.
  std::optional<SeriesPmf> scale_free_law_;
};

/// E[exp(-lam Z^T_t)] = 1 - u_t((1 - e^{-lam}) v(T - t)) / v(T).
double reduced_marginal_laplace(const BranchingMechanism& m, double T, double t, double lam);

/// Exact-sampler Monte Carlo: KS of the first branch level against its cdf,
/// and E[exp(-lam Z^T_t)] against the closed expression within 3 SE.
ExperimentReport reduced_exact_experiment(const BranchingMechanism& m, double T, double t,
                                          double lam, std::int64_t n_samples, const RunContext& ctx,
                                          double ks_tolerance = 0.015);

/// Galton-Watson trees conditioned on height >= [gamma_p T]; the number of
/// subtrees above generation [gamma_p t] reaching [gamma_p T] is compared with
/// the continuum law through its Laplace transform.
ExperimentReport discrete_reduced_crosscheck(const OffspringDistribution& d, std::int64_t p,
                                             double T, double t, double lam,
                                             std::int64_t n_samples, const RunContext& ctx,
                                             double bias = 0.03);

}  // namespace levytree
