#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace levytree::numerics {

/// Newton iteration kept inside a shrinking bracket [lo, hi]; falls back to
/// bisection whenever the Newton step leaves the bracket or stalls.
/// `f` must change sign on the bracket. `fdf` returns (f, f').
template <class FDF>
double bracketed_newton(FDF&& fdf, double lo, double hi, double x0, double rel_tol = 1e-14,
                        int max_iter = 200) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::runtime_error("bracketed_newton: root not bracketed");
  const bool increasing = fhi > 0;
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    auto [fx, dfx] = fdf(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - fx / dfx;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double scale = std::max(std::abs(next), std::numeric_limits<double>::min());
    if (std::abs(next - x) <= rel_tol * scale || hi - lo <= rel_tol * scale) return next;
    x = next;
  }
  return x;
}

/// Plain bisection for a monotone predicate-driven search on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol, int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Integral over [a, inf) of a decaying integrand.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol = 1e-12);

}  // namespace levytree::numerics
