#include "levytree/mechanism.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levytree/numerics.hpp"

namespace levytree {

namespace {

// exp(-x) - 1 + x without cancellation for small x.
double compensated_exp(double x) {
  if (std::abs(x) < 1e-3) {
    return x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)));
  }
  return std::expm1(-x) + x;
}

void require_nonnegative(double lam, const char* what) {
  if (!(lam >= 0.0)) throw std::domain_error(std::string(what) + ": argument must be >= 0");
}

}  // namespace

double falling_factorial(double gamma, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= gamma - i;
  return out;
}

BranchingMechanism::BranchingMechanism(double alpha, double beta, std::vector<LevyAtom> atoms,
                                       std::optional<StableTail> stable)
    : alpha_(alpha), beta_(beta), atoms_(std::move(atoms)), stable_(stable) {
  if (!(alpha_ >= 0.0)) throw std::invalid_argument("mechanism: alpha must be >= 0");
  if (!(beta_ >= 0.0)) throw std::invalid_argument("mechanism: beta must be >= 0");
  for (const auto& a : atoms_) {
    if (!(a.position > 0.0) || !(a.weight > 0.0)) {
      throw std::invalid_argument("mechanism: atoms need positive position and weight");
    }
  }
  if (stable_) {
    if (!(stable_->scale > 0.0)) throw std::invalid_argument("mechanism: stable scale must be > 0");
    if (!(stable_->index > 1.0 && stable_->index < 2.0)) {
      throw std::invalid_argument("mechanism: stable index must lie in (1,2)");
    }
  }
  if (beta_ == 0.0 && atoms_.empty() && !stable_) {
    throw std::invalid_argument("mechanism: linear psi is excluded (need beta, atoms or stable term)");
  }
}

BranchingMechanism BranchingMechanism::quadratic(double beta, double alpha) {
  return BranchingMechanism(alpha, beta, {});
}

BranchingMechanism BranchingMechanism::stable(double scale, double index, double alpha) {
  if (index == 2.0) return quadratic(scale, alpha);
  return BranchingMechanism(alpha, 0.0, {}, StableTail{scale, index});
}

bool BranchingMechanism::is_pure_quadratic() const {
  return alpha_ == 0.0 && atoms_.empty() && !stable_ && beta_ > 0.0;
}

bool BranchingMechanism::is_pure_stable() const {
  return alpha_ == 0.0 && beta_ == 0.0 && atoms_.empty() && stable_.has_value();
}

double BranchingMechanism::psi(double lam) const {
  require_nonnegative(lam, "psi");
  double out = alpha_ * lam + beta_ * lam * lam;
  for (const auto& a : atoms_) out += a.weight * compensated_exp(lam * a.position);
  if (stable_) out += stable_->scale * std::pow(lam, stable_->index);
  return out;
}

double BranchingMechanism::psi_prime(double lam) const { return psi_derivative(1, lam); }

double BranchingMechanism::psi_derivative(int k, double lam) const {
  if (k < 1) throw std::domain_error("psi_derivative: order must be >= 1");
  require_nonnegative(lam, "psi_derivative");
  if (k >= 2 && stable_ && lam == 0.0) {
    throw std::domain_error("psi_derivative: stable term is singular at 0 for k >= 2");
  }
  double out = 0.0;
  if (k == 1) {
    out = alpha_ + 2.0 * beta_ * lam;
    for (const auto& a : atoms_) out += -a.weight * a.position * std::expm1(-lam * a.position);
  } else {
    if (k == 2) out += 2.0 * beta_;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (const auto& a : atoms_) {
      out += sign * a.weight * std::pow(a.position, k) * std::exp(-lam * a.position);
    }
  }
  if (stable_) {
    const double g = stable_->index;
    out += stable_->scale * falling_factorial(g, k) * std::pow(lam, g - k);
  }
  return out;
}

double BranchingMechanism::psi_inverse(double y) const {
  require_nonnegative(y, "psi_inverse");
  if (y == 0.0) return 0.0;
  double hi = 1.0;
  while (psi(hi) < y) hi *= 2.0;
  auto fdf = [&](double x) { return std::pair{psi(x) - y, psi_prime(x)}; };
  return numerics::bracketed_newton(fdf, 0.0, hi, 0.5 * hi);
}

double BranchingMechanism::psi_tilde(double lam) const {
  require_nonnegative(lam, "psi_tilde");
  if (lam == 0.0) return alpha_;
  // Divide term by term so small arguments keep full precision.
  double out = alpha_ + beta_ * lam;
  for (const auto& a : atoms_) out += a.weight * compensated_exp(lam * a.position) / lam;
  if (stable_) out += stable_->scale * std::pow(lam, stable_->index - 1.0);
  return out;
}

double BranchingMechanism::gamma_quotient(double a, double b) const {
  if (a == b) return psi_prime(a);
  return (psi(a) - psi(b)) / (a - b);
}

double BranchingMechanism::theta(double r) const {
  require_nonnegative(r, "theta");
  if (r == 0.0) return 0.0;
  // psi'(r) - psi(r)/r, assembled per term to avoid cancellation.
  double out = beta_ * r;
  for (const auto& a : atoms_) {
    const double x = a.position * r;
    // x(1-e^{-x}) - (e^{-x}-1+x) = 1 - (1+x)e^{-x}
    double term;
    if (x < 1e-3) {
      term = x * x * (0.5 - x * (1.0 / 3.0 - x / 8.0));
    } else {
      term = -std::expm1(-x) - x * std::exp(-x);
    }
    out += a.weight * term / r;
  }
  if (stable_) {
    out += stable_->scale * (stable_->index - 1.0) * std::pow(r, stable_->index - 1.0);
  }
  return out;
}

bool BranchingMechanism::grey_condition() const { return beta_ > 0.0 || stable_.has_value(); }

bool BranchingMechanism::sheu_condition() const {
  // For this family int_0^t psi grows like t^3 (beta > 0), t^{gamma+1} (stable)
  // or t^2 (atoms only); the outer integral converges iff the exponent exceeds 2.
  return beta_ > 0.0 || stable_.has_value();
}

double BranchingMechanism::gamma_exponent() const {
  if (beta_ > 0.0) return 2.0;
  if (stable_) return stable_->index;
  return 1.0;
}

std::string BranchingMechanism::describe() const {
  std::ostringstream os;
  os << "psi(l) = " << alpha_ << " l + " << beta_ << " l^2";
  for (const auto& a : atoms_) os << " + " << a.weight << " (e^{-" << a.position << " l} - 1 + " << a.position << " l)";
  if (stable_) os << " + " << stable_->scale << " l^" << stable_->index;
  return os.str();
}

}  // namespace levytree
