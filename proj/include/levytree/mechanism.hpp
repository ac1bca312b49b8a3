#pragma once

#include <optional>
#include <string>
#include <vector>

namespace levytree {

/// One atom r*delta of the Levy measure, weighted by `weight`.
struct LevyAtom {
  double position = 0.0;
  double weight = 0.0;
};

/// Closed-form contribution c * lambda^index of a stable Levy measure.
struct StableTail {
  double scale = 0.0;
  double index = 0.0;
};

/// Branching mechanism
///
///   psi(l) = alpha*l + beta*l^2 + sum_i w_i (exp(-l r_i) - 1 + l r_i) + c*l^gamma
///
/// restricted to a finite atomic Levy measure plus an optional stable term so
/// that every derivative stays in closed form. Immutable after construction.
class BranchingMechanism {
 public:
  BranchingMechanism(double alpha, double beta, std::vector<LevyAtom> atoms,
                     std::optional<StableTail> stable = std::nullopt);

  static BranchingMechanism quadratic(double beta = 1.0, double alpha = 0.0);
  static BranchingMechanism stable(double scale, double index, double alpha = 0.0);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<LevyAtom>& atoms() const { return atoms_; }
  const std::optional<StableTail>& stable_tail() const { return stable_; }

  /// True when psi is exactly beta*l^2 (no drift, no atoms, no stable term).
  bool is_pure_quadratic() const;
  /// True when psi is exactly c*l^gamma.
  bool is_pure_stable() const;

  double psi(double lam) const;
  double psi_prime(double lam) const;
  /// Exact k-th derivative, k >= 1. Singular at 0 for k >= 2 with a stable term.
  double psi_derivative(int k, double lam) const;
  /// Unique x >= 0 with psi(x) = y, to 1e-12 relative.
  double psi_inverse(double y) const;

  /// psi(l)/l, with psi_tilde(0) = alpha.
  double psi_tilde(double lam) const;
  /// Secant slope (psi(a)-psi(b))/(a-b); psi'(a) on the diagonal.
  double gamma_quotient(double a, double b) const;
  /// psi'(r) - psi_tilde(r) >= 0.
  double theta(double r) const;

  /// Whether int_1^inf du/psi(u) < inf.
  bool grey_condition() const;
  /// Whether int_1^inf (int_0^t psi)^{-1/2} dt < inf.
  bool sheu_condition() const;
  /// sup{r : l^{-r} psi(l) -> inf}.
  double gamma_exponent() const;

  std::string describe() const;

 private:
  double alpha_;
  double beta_;
  std::vector<LevyAtom> atoms_;
  std::optional<StableTail> stable_;
};

/// gamma (gamma-1) ... (gamma-k+1).
double falling_factorial(double gamma, int k);

}  // namespace levytree
