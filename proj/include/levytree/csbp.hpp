#pragma once

#include "levytree/mechanism.hpp"

namespace levytree {

/// Laplace-functional kernel of the psi-CSBP.
///
/// u(t, l) is the solution of u + int_0^t psi(u_s) ds = l, obtained by
/// inverting int_x^l dv/psi(v) = t; v(t) solves int_v^inf du/psi(u) = t.
/// Both integrals are taken in the variable s = log(v), where the integrand
/// 1/psi_tilde(e^s) is bounded and smooth.
///
/// Closed forms exist for pure quadratic and pure stable mechanisms; they are
/// used when `use_closed_forms` is set and are otherwise left to the tests as
/// independent oracles.
class CsbpKernel {
 public:
  explicit CsbpKernel(BranchingMechanism mechanism, double quad_tol = 1e-10,
                      bool use_closed_forms = true);

  const BranchingMechanism& mechanism() const { return mechanism_; }

  double u(double t, double lam) const;
  /// Requires the Grey condition; throws std::domain_error ("infinite v") otherwise.
  double v(double t) const;
  /// int_x^inf du/psi(u): the level at which v takes the value x.
  double v_inverse(double x) const;
  /// int_x^lam dv/psi(v) for 0 < x <= lam.
  double travel_time(double x, double lam) const;

  /// |u(t, u(s, l)) - u(t+s, l)|
  double semigroup_defect(double t, double s, double lam) const;
  /// |central difference of u in l  -  psi(u_t(l))/psi(l)|
  double derivative_defect(double t, double lam, double step = 1e-5) const;
  /// |u_t(l) + int_0^t psi(u_s(l)) ds - l|, with the time integral taken by
  /// an independent adaptive quadrature over s.
  double integral_equation_residual(double t, double lam) const;

 private:
  double log_integrand(double s) const;
  double tail_from_log(double s) const;

  BranchingMechanism mechanism_;
  double quad_tol_;
  bool closed_forms_;
};

}  // namespace levytree
