#include "levytree/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levytree::numerics {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, rel_tol);
  // Mapped to [0, 1] so the rounding floor of the error estimate scales with
  // the width; otherwise very short intervals recurse to full depth.
  const double w = b - a;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double y) { return w * f(a + w * y); }, 0.0, 1.0, 20, rel_tol, &error);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  return integrator.integrate([&](double x) { return f(a + x); }, rel_tol, &error, &l1);
}

}  // namespace levytree::numerics
