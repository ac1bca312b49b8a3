#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "levytree/mechanism.hpp"

namespace levytree {

/// Coefficients scale*|binom(index, k)| for k >= 2: the r^k coefficients of
/// scale*(1-r)^index for 1 < index <= 2.
struct StableSeries {
  double index = 2.0;
  double scale = 0.0;

  double coefficient(std::int64_t k) const;
  /// Sum of coefficients with k > cutoff (cutoff >= 1), in closed form.
  double tail_beyond(std::int64_t cutoff) const;
  /// Draw k > cutoff with probability proportional to coefficient(k).
  std::int64_t sample_beyond(std::int64_t cutoff, std::mt19937_64& rng) const;
};

/// Coefficients scale * e^{-mean} mean^k / k! for k >= 2.
struct PoissonSeries {
  double mean = 0.0;
  double scale = 0.0;

  double coefficient(std::int64_t k) const;
  double tail_beyond(std::int64_t cutoff) const;
  std::int64_t sample_beyond(std::int64_t cutoff, std::mt19937_64& rng) const;
};

/// Probability mass function on {0,1,2,...} made of a dense prefix plus the
/// analytic tails of a few series components beyond the prefix.
///
/// Tail masses come from closed forms, so `dense_mass() + tail_mass()` is an
/// independent check of normalization rather than a tautology.
class SeriesPmf {
 public:
  SeriesPmf() = default;
  SeriesPmf(std::vector<double> dense, std::vector<StableSeries> stable_tails,
            std::vector<PoissonSeries> poisson_tails);

  double pmf(std::int64_t k) const;
  const std::vector<double>& dense() const { return dense_; }
  std::int64_t cutoff() const { return static_cast<std::int64_t>(dense_.size()) - 1; }
  double dense_mass() const;
  double tail_mass() const;
  double mean() const;

  std::int64_t sample(std::mt19937_64& rng) const;

 private:
  void build_alias();
  double sum_dense() const;

  std::vector<double> dense_;
  std::vector<StableSeries> stable_;
  std::vector<PoissonSeries> poisson_;
  std::vector<double> tail_weights_;
  double tail_total_ = 0.0;
  double dense_total_ = 0.0;
  // Vose alias table over the dense prefix.
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_index_;
};

/// Offspring pmf read off the power series of psi((1-r)x) around r = 0,
/// divided by `denominator`:
///   P[k] = x^{k-1} |psi^{(k)}(x)| / (k! denominator),  k >= 2,
/// with P[0] = `mass_at_zero` and P[1] = 0. The dense prefix is extended until
/// the analytic tail drops below `tail_target` or `max_cutoff` is reached.
SeriesPmf derivative_series_pmf(const BranchingMechanism& m, double x, double denominator,
                                double mass_at_zero, double tail_target = 1e-12,
                                std::int64_t max_cutoff = 1 << 14);

}  // namespace levytree
