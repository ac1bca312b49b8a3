#include "levytree/csbp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "levytree/numerics.hpp"

namespace levytree {

namespace {

// Newton on a decreasing function of s known only through increments:
// value(s_new) = value(s_old) - int_{s_old}^{s_new} slope, slope > 0.
template <class Increment, class Slope>
double solve_decreasing(Increment&& increment, Slope&& slope, double lo, double phi_lo, double hi,
                        double phi_hi) {
  double x = std::abs(phi_lo) < std::abs(phi_hi) ? lo : hi;
  double phi = std::abs(phi_lo) < std::abs(phi_hi) ? phi_lo : phi_hi;
  for (int iter = 0; iter < 200; ++iter) {
    if (phi == 0.0) return x;
    double next = x + phi / slope(x);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double phi_next = phi - increment(x, next);
    if (phi_next > 0) {
      lo = next;
    } else {
      hi = next;
    }
    const double step = std::abs(next - x);
    x = next;
    phi = phi_next;
    if (step <= 1e-15 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) {
      break;
    }
  }
  return x;
}

}  // namespace

CsbpKernel::CsbpKernel(BranchingMechanism mechanism, double quad_tol, bool use_closed_forms)
    : mechanism_(std::move(mechanism)), quad_tol_(quad_tol), closed_forms_(use_closed_forms) {}

double CsbpKernel::log_integrand(double s) const {
  const double x = std::exp(s);
  if (std::isinf(x)) return 0.0;  // psi_tilde grows without bound
  return 1.0 / mechanism_.psi_tilde(x);
}

double CsbpKernel::travel_time(double x, double lam) const {
  if (!(x > 0.0) || x > lam) throw std::domain_error("travel_time: need 0 < x <= lam");
  return numerics::integrate([this](double s) { return log_integrand(s); }, std::log(x),
                             std::log(lam), quad_tol_);
}

double CsbpKernel::u(double t, double lam) const {
  if (t < 0.0 || lam < 0.0) throw std::domain_error("u: need t >= 0 and lam >= 0");
  if (t == 0.0 || lam == 0.0) return lam;
  if (std::isinf(lam)) return v(t);
  const auto& m = mechanism_;
  if (closed_forms_ && m.is_pure_quadratic()) return lam / (1.0 + m.beta() * t * lam);
  if (closed_forms_ && m.is_pure_stable()) {
    const double a = m.stable_tail()->index - 1.0;
    return std::pow(std::pow(lam, -a) + m.stable_tail()->scale * a * t, -1.0 / a);
  }

  auto f = [this](double s) { return log_integrand(s); };
  auto increment = [&](double from, double to) {
    // phi(s) = int_s^L f - t, so phi(to) = phi(from) - int_to^from f.
    return -numerics::integrate(f, to, from, quad_tol_);
  };
  const double top = std::log(lam);
  double hi = top;
  double phi_hi = -t;
  double width = 1.0;
  double lo = top - width;
  double phi_lo = phi_hi + numerics::integrate(f, lo, hi, quad_tol_);
  while (phi_lo <= 0.0) {
    hi = lo;
    phi_hi = phi_lo;
    width *= 2.0;
    lo = hi - width;
    phi_lo = phi_hi + numerics::integrate(f, lo, hi, quad_tol_);
    if (width > 1e4) throw std::runtime_error("u: failed to bracket the travel-time root");
  }
  return std::exp(solve_decreasing(increment, f, lo, phi_lo, hi, phi_hi));
}

double CsbpKernel::tail_from_log(double s) const {
  auto f = [this](double x) { return log_integrand(x); };
  const double split = std::max(s, 0.0) + std::log(10.0);
  return numerics::integrate(f, s, split, quad_tol_) +
         numerics::integrate_to_infinity(f, split, quad_tol_);
}

double CsbpKernel::v_inverse(double x) const {
  if (!mechanism_.grey_condition()) throw std::domain_error("infinite v: Grey condition fails");
  if (!(x > 0.0)) throw std::domain_error("v_inverse: need x > 0");
  const auto& m = mechanism_;
  if (closed_forms_ && m.is_pure_quadratic()) return 1.0 / (m.beta() * x);
  if (closed_forms_ && m.is_pure_stable()) {
    const double a = m.stable_tail()->index - 1.0;
    return std::pow(x, -a) / (m.stable_tail()->scale * a);
  }
  return tail_from_log(std::log(x));
}

double CsbpKernel::v(double t) const {
  const auto& m = mechanism_;
  if (!m.grey_condition()) throw std::domain_error("infinite v: Grey condition fails");
  if (!(t > 0.0)) throw std::domain_error("v: need t > 0");
  if (closed_forms_ && m.is_pure_quadratic()) return 1.0 / (m.beta() * t);
  if (closed_forms_ && m.is_pure_stable()) {
    const double a = m.stable_tail()->index - 1.0;
    return std::pow(m.stable_tail()->scale * a * t, -1.0 / a);
  }

  double guess;
  if (m.beta() > 0.0) {
    guess = 1.0 / (m.beta() * t);
  } else {
    const double a = m.stable_tail()->index - 1.0;
    guess = std::pow(m.stable_tail()->scale * a * t, -1.0 / a);
  }
  auto f = [this](double x) { return log_integrand(x); };
  auto increment = [&](double from, double to) { return -numerics::integrate(f, to, from, quad_tol_); };
  // phi(s) = int_s^inf f - t is decreasing in s.
  double x0 = std::log(guess);
  double phi0 = tail_from_log(x0) - t;
  double lo = x0, phi_lo = phi0, hi = x0, phi_hi = phi0;
  double width = 1.0;
  while (phi_lo <= 0.0) {
    hi = lo;
    phi_hi = phi_lo;
    lo = hi - width;
    phi_lo = phi_hi + numerics::integrate(f, lo, hi, quad_tol_);
    width *= 2.0;
    if (width > 1e4) throw std::runtime_error("v: failed to bracket");
  }
  while (phi_hi > 0.0) {
    lo = hi;
    phi_lo = phi_hi;
    hi = lo + width;
    phi_hi = phi_lo - numerics::integrate(f, lo, hi, quad_tol_);
    width *= 2.0;
    if (width > 1e4) throw std::runtime_error("v: failed to bracket");
  }
  return std::exp(solve_decreasing(increment, f, lo, phi_lo, hi, phi_hi));
}

double CsbpKernel::semigroup_defect(double t, double s, double lam) const {
  return std::abs(u(t, u(s, lam)) - u(t + s, lam));
}

double CsbpKernel::derivative_defect(double t, double lam, double step) const {
  if (!(lam > 0.0)) throw std::domain_error("derivative_defect: need lam > 0");
  const double h = step * std::max(1.0, lam);
  double fd;
  if (lam > h) {
    fd = (u(t, lam + h) - u(t, lam - h)) / (2.0 * h);
  } else {
    fd = (u(t, lam + h) - u(t, lam)) / h;
  }
  return std::abs(fd - mechanism_.psi(u(t, lam)) / mechanism_.psi(lam));
}

double CsbpKernel::integral_equation_residual(double t, double lam) const {
  if (t == 0.0) return std::abs(u(0.0, lam) - lam);
  const double integral = numerics::integrate(
      [&](double s) { return mechanism_.psi(u(s, lam)); }, 0.0, t, 1e-12);
  return std::abs(u(t, lam) + integral - lam);
}

}  // namespace levytree
