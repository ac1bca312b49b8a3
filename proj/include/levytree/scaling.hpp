#pragma once

#include <cstdint>
#include <vector>

#include "levytree/gw.hpp"
#include "levytree/offspring.hpp"
#include "levytree/parallel.hpp"
#include "levytree/report.hpp"

namespace levytree {

/// Samples of gamma_p^{-1} H^p_{[p gamma_p t]} for the forest coded by an
/// i.i.d. walk.
std::vector<double> rescaled_height_samples(const OffspringDistribution& d, std::int64_t p, double t,
                                            std::int64_t n_samples, const RunContext& ctx);

/// KS distance of the rescaled height at time t (geometric_half) to |N(0, 2t)|.
ExperimentReport feller_height_marginal(std::int64_t p, double t, std::int64_t n_samples,
                                        const RunContext& ctx, double tolerance = 0.05);

/// KS distances over a sweep of p; passes when the largest p beats the
/// smallest and the least-squares slope against log p is negative.
ExperimentReport feller_height_trend(const std::vector<std::int64_t>& ps, double t,
                                     std::int64_t n_samples, const RunContext& ctx);

/// For a forest of exactly p trees: the number of visits of H to level k
/// equals the total size of generation k, for every k.
bool discrete_ray_knight_identity(std::int64_t p, const Forest& forest);

/// Checks the identity on n_forests random forests of p trees. Forests whose
/// total size exceeds `forest_budget` are redrawn.
ExperimentReport discrete_ray_knight_experiment(const OffspringDistribution& d, std::int64_t p,
                                                std::int64_t n_forests, const RunContext& ctx,
                                                std::int64_t forest_budget = 1'000'000);

/// Monte Carlo E[exp(-lam Y^p_{[gamma_p a]} / p)] from Y_0 = p against
/// exp(-u_a(lam)) for the limit mechanism of d.
ExperimentReport ray_knight_laplace(const OffspringDistribution& d, std::int64_t p, double a,
                                    double lam, std::int64_t n_reps, const RunContext& ctx,
                                    double bias = 0.02);

/// g_{[gamma_p a]}(0)^p against exp(-v(a)); deterministic.
ExperimentReport extinction_law(const OffspringDistribution& d, std::int64_t p, double a,
                                double tolerance = 5e-3);

/// Regression of the log mean window oscillation of the rescaled height path
/// on log lag, over dyadic lags. Soft check against 1 - 1/gamma.
ExperimentReport holder_exponent_estimate(const OffspringDistribution& d, std::int64_t p,
                                          std::int64_t n_paths, const RunContext& ctx,
                                          int n_lags = 9, double window = 0.15);

/// Per-p 0.99 quantile of |gamma_p^{-1} C_{2 p gamma_p t} - gamma_p^{-1} H_{[p gamma_p t]}|;
/// passes when the quantiles decrease along the sweep.
ExperimentReport contour_height_agreement(const OffspringDistribution& d,
                                          const std::vector<std::int64_t>& ps, double t,
                                          std::int64_t n_samples, const RunContext& ctx);

}  // namespace levytree
