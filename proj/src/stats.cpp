#include "levytree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace levytree {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double x = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == x) ++j;
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(j) / n;
    const double f_left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    const double f_at = cdf(x);
    d = std::max({d, std::abs(after - f_at), std::abs(before - f_left)});
    i = j;
  }
  return std::min(d, 1.0);
}

ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected,
                     int fitted_parameters) {
  if (observed.size() != expected.size()) throw std::invalid_argument("chi_square: size mismatch");
  ChiSquare out;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      if (observed[i] > 0.0) out.stat = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    const double diff = observed[i] - expected[i];
    out.stat += diff * diff / expected[i];
  }
  out.dof = bins - 1 - fitted_parameters;
  if (out.dof <= 0) {
    out.p_value = out.stat == 0.0 ? 1.0 : 0.0;
  } else if (std::isinf(out.stat)) {
    out.p_value = 0.0;
  } else {
    out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.stat);
  }
  return out;
}

double laplace_gap(std::span<const double> samples, std::span<const double> lam_grid,
                   const std::function<double(double)>& reference) {
  if (samples.empty()) throw std::invalid_argument("laplace_gap: no samples");
  double gap = 0.0;
  for (double lam : lam_grid) {
    double acc = 0.0;
    for (double x : samples) acc += std::exp(-lam * x);
    gap = std::max(gap, std::abs(acc / static_cast<double>(samples.size()) - reference(lam)));
  }
  return gap;
}

double Moments::variance() const {
  if (n < 2) return 0.0;
  const double m = mean();
  return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
}

double Moments::standard_error() const {
  return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double half_normal_cdf(double x, double variance) {
  if (x < 0.0) return 0.0;
  if (variance <= 0.0) return 1.0;
  return std::erf(x / std::sqrt(2.0 * variance));
}

}  // namespace levytree
