#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "levytree/csbp.hpp"
#include "levytree/mechanism.hpp"

using namespace levytree;

namespace {

BranchingMechanism mixed() { return BranchingMechanism(0.5, 0.3, {{1.0, 2.0}, {0.25, 4.0}}, StableTail{0.4, 1.6}); }

}  // namespace

TEST_SUITE("csbp") {

TEST_CASE("mechanism derivatives against finite differences") {
  const auto m = mixed();
  for (double x : {0.2, 1.0, 3.5}) {
    const double h = 1e-4 * x;
    CHECK(m.psi_prime(x) == doctest::Approx((m.psi(x + h) - m.psi(x - h)) / (2 * h)).epsilon(1e-7));
    for (int k = 1; k <= 4; ++k) {
      const double fd = (m.psi_derivative(k, x + h) - m.psi_derivative(k, x - h)) / (2 * h);
      CHECK(m.psi_derivative(k + 1, x) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(m.theta(x) == doctest::Approx(m.psi_prime(x) - m.psi(x) / x));
    CHECK(m.psi_tilde(x) == doctest::Approx(m.psi(x) / x));
    CHECK(m.psi(m.psi_inverse(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK(m.psi_tilde(0.0) == 0.5);
  CHECK(m.gamma_quotient(1.0, 1.0) == doctest::Approx(m.psi_prime(1.0)));
  CHECK(m.gamma_quotient(2.0, 1.0) == doctest::Approx(m.psi(2.0) - m.psi(1.0)));
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(1.5, 0) == 1.0);
  CHECK(falling_factorial(1.5, 3) == doctest::Approx(1.5 * 0.5 * -0.5));
}

TEST_CASE("growth conditions") {
  CHECK(BranchingMechanism::quadratic().grey_condition());
  CHECK(BranchingMechanism::quadratic().sheu_condition());
  CHECK(BranchingMechanism::stable(1.0, 1.5).grey_condition());
  CHECK(BranchingMechanism::stable(1.0, 1.5).gamma_exponent() == 1.5);
  const BranchingMechanism atoms_only(0.2, 0.0, {{1.0, 1.0}});
  CHECK_FALSE(atoms_only.grey_condition());
  CHECK_THROWS_AS(CsbpKernel(atoms_only).v(1.0), std::domain_error);
  CHECK_THROWS(BranchingMechanism(-1.0, 0.0, {}));
}

TEST_CASE("quadratic and stable closed forms against quadrature") {
  const CsbpKernel q(BranchingMechanism::quadratic(1.0), 1e-12, false);
  CHECK(q.u(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(q.v(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q.v(0.25) == doctest::Approx(4.0).epsilon(1e-10));
  for (double g : {1.2, 1.5, 1.9}) {
    const auto m = BranchingMechanism::stable(0.7, g);
    const CsbpKernel numeric(m, 1e-12, false), closed(m);
    const double a = g - 1.0;
    for (double t : {0.1, 1.0, 3.0}) {
      for (double lam : {0.05, 1.0, 20.0}) {
        const double oracle = std::pow(std::pow(lam, -a) + 0.7 * a * t, -1.0 / a);
        CHECK(closed.u(t, lam) == doctest::Approx(oracle).epsilon(1e-13));
        CHECK(numeric.u(t, lam) == doctest::Approx(oracle).epsilon(1e-9));
      }
      CHECK(numeric.v(t) == doctest::Approx(std::pow(0.7 * a * t, -1.0 / a)).epsilon(1e-9));
      CHECK(numeric.v_inverse(closed.v(t)) == doctest::Approx(t).epsilon(1e-9));
    }
  }
}

TEST_CASE("semigroup, integral equation and derivative identities") {
  for (const auto& m : {mixed(), BranchingMechanism::quadratic(0.5, 0.3), BranchingMechanism::stable(1.0, 1.4, 0.2)}) {
    const CsbpKernel k(m);
    for (double t : {0.1, 0.7, 2.0}) {
      for (double lam : {0.01, 0.5, 4.0, 50.0}) {
        CHECK(k.semigroup_defect(t, 0.4, lam) < 1e-8);
        CHECK(k.integral_equation_residual(t, lam) < 1e-8);
        CHECK(k.derivative_defect(t, lam) < 1e-5);
        CHECK(k.u(t, lam) < lam);
      }
    }
  }
}

TEST_CASE("v is the limit of u and v_inverse inverts it") {
  const CsbpKernel k(mixed());
  for (double t : {0.2, 1.0, 5.0}) {
    const double v = k.v(t);
    CHECK(k.u(t, 1e9) == doctest::Approx(v).epsilon(1e-4));
    CHECK(k.u(t, INFINITY) == v);
    CHECK(k.v_inverse(v) == doctest::Approx(t).epsilon(1e-9));
  }
  CHECK(k.travel_time(0.5, 2.0) > 0.0);
  CHECK(k.u(k.travel_time(0.5, 2.0), 2.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("argument checks") {
  const CsbpKernel k(BranchingMechanism::quadratic());
  CHECK_THROWS_AS(k.u(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(k.v(0.0), std::domain_error);
  CHECK(k.u(0.0, 3.0) == 3.0);
  CHECK(k.u(2.0, 0.0) == 0.0);
}

}  // TEST_SUITE
