#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"
#include "levytree/mechanism.hpp"
#include "levytree/parallel.hpp"
#include "levytree/report.hpp"
#include "levytree/series_pmf.hpp"
#include "levytree/tree.hpp"

namespace levytree {

/// Skeleton plus one lifetime per vertex (lexicographic order).
struct MarkedTree {
  OrderedTree skeleton;
  std::vector<double> lifetimes;

  /// {"skeleton": "2,0,0", "lifetimes": [...]}
  nlohmann::json to_json() const;
};

/// Marked tree spanned by the times t_1 <= ... <= t_p in the excursion e
/// (indices into e). Equal minima between consecutive times are grouped into
/// one node with several branches.
MarkedTree extract_marginal_tree(std::span<const double> e, std::span<const std::size_t> times);

/// Offspring law of the tree spanned by Poisson marks of rate lam:
/// P[0] = lam / (x psi'(x)), P[1] = 0, P[k] = x^{k-1} |psi^{(k)}(x)| / (k! psi'(x)),
/// with x = psi^{-1}(lam).
SeriesPmf poisson_offspring_pmf(const BranchingMechanism& m, double lam);
/// Closed-form generating function r + psi((1-r) x) / (x psi'(x)) of the same law.
double poisson_offspring_gf(const BranchingMechanism& m, double lam, double r);
/// Rate psi'(psi^{-1}(lam)) of the exponential lifetimes.
double poisson_lifetime_rate(const BranchingMechanism& m, double lam);

/// Continuous-time Galton-Watson tree with the law above.
MarkedTree poisson_tree_sample(const BranchingMechanism& m, double lam, std::mt19937_64& rng,
                               std::int64_t budget = 10'000'000);
/// Same, with the offspring law and lifetime rate precomputed.
MarkedTree poisson_tree_sample(const SeriesPmf& law, double rate, std::mt19937_64& rng,
                               std::int64_t budget = 10'000'000);

/// All ordered trees with p leaves and no vertex with exactly one child.
std::vector<OrderedTree> enumerate_Tstar(int p);

/// Probability of a skeleton under the p-point marginal of the stable tree:
///   p! / prod k_v! * prod |(g-1)(g-2)...(g-k_v+1)| / ((g-1)(2g-1)...((p-1)g-1)).
double stable_skeleton_pmf(double gamma, const OrderedTree& skeleton);

/// 2^p (1*3*...*(2p-3)) S exp(-S^2) with S the total lifetime, for binary skeletons.
double quadratic_lifetime_density(const OrderedTree& skeleton, std::span<const double> lifetimes);

/// Skeleton frequencies of the 3-point marginal of size-conditioned geometric
/// trees, compared with the (1/2, 1/2) binary law by chi-square.
ExperimentReport stable_marginal_crosscheck(std::int64_t n_vertices, std::int64_t reps,
                                            const RunContext& ctx, double significance = 1e-3);

/// Normalization of the stable skeleton law over enumerate_Tstar for p <= p_max.
ExperimentReport stable_skeleton_normalization(const std::vector<double>& gammas, int p_max,
                                               double tolerance = 1e-10);

/// Offspring pmf normalization and an empirical chi-square of the sampler.
ExperimentReport poisson_tree_experiment(const BranchingMechanism& m, double lam,
                                         std::int64_t n_trees, const RunContext& ctx,
                                         double significance = 1e-3);

}  // namespace levytree
