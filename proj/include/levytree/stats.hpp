#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace levytree {

/// sup_x |F_n(x) - F(x)|, taking both one-sided limits of F at each sample
/// value so that atoms in the reference are handled exactly.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct ChiSquare {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson statistic over bins with positive expectation; dof = bins - 1 -
/// fitted_parameters. An observation in a bin with zero expectation makes the
/// statistic infinite.
ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected,
                     int fitted_parameters = 0);

/// max over the grid of |mean exp(-lam x) - reference(lam)|.
double laplace_gap(std::span<const double> samples, std::span<const double> lam_grid,
                   const std::function<double(double)>& reference);

/// Streaming sample moments; merge() is exact and order-dependent only
/// through floating-point rounding, so chunk order is kept fixed.
struct Moments {
  std::int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const;
  /// CLT standard error of the mean.
  double standard_error() const;
};

/// Ordinary least squares slope and intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Empirical quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

/// Cdf of |N(0, variance)|.
double half_normal_cdf(double x, double variance);

}  // namespace levytree
