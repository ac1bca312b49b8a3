#include <cmath>

#include "doctest.h"
#include "levytree/csbp.hpp"
#include "levytree/solvers.hpp"

using namespace levytree;

TEST_SUITE("solvers") {

TEST_CASE("grid function interpolation") {
  const GridFunction g{-1.0, 0.5, {0.0, 1.0, 4.0}};
  CHECK(g.at(-1.0) == 0.0);
  CHECK(g.at(-0.75) == doctest::Approx(0.5));
  CHECK(g.at(-0.25) == doctest::Approx(2.5));
  CHECK(g.at(5.0) == 4.0);
  CHECK(g.at(-5.0) == 0.0);
}

TEST_CASE("constant data follows the CSBP flow") {
  const auto m = BranchingMechanism::stable(1.0, 1.5);
  const CsbpKernel k(m);
  Super2Options opt;
  opt.initial_cells = 40;
  opt.initial_steps = 10;
  const auto r = solve_super2(m, [](double) { return 2.0; }, 0.7, opt);
  CHECK(r.converged);
  for (double x : {-7.0, 0.0, 3.0}) CHECK(r.u.at(x) == doctest::Approx(k.u(0.7, 2.0)).epsilon(1e-10));
}

TEST_CASE("negligible reaction reduces to the heat equation") {
  // (1/2) u'' with Gaussian data: variance grows by t.
  const auto m = BranchingMechanism::quadratic(1e-12);
  const double t = 0.5;
  Super2Options opt;
  opt.probes = {0.0, 1.0, -2.0};
  const auto r = solve_super2(m, [](double x) { return std::exp(-0.5 * x * x); }, t, opt);
  REQUIRE(r.converged);
  for (double x : opt.probes) {
    const double exact = std::exp(-0.5 * x * x / (1.0 + t)) / std::sqrt(1.0 + t);
    CHECK(r.u.at(x) == doctest::Approx(exact).epsilon(2e-6));
  }
}

TEST_CASE("second-order convergence of the fixed-resolution solver") {
  const auto m = BranchingMechanism::quadratic(1.0);
  auto f = [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; };
  const double ref = solve_super2_fixed(m, f, 0.5, 8.0, 6400, 800).at(0.5);
  const double e1 = std::abs(solve_super2_fixed(m, f, 0.5, 8.0, 400, 50).at(0.5) - ref);
  const double e2 = std::abs(solve_super2_fixed(m, f, 0.5, 8.0, 800, 100).at(0.5) - ref);
  const double e3 = std::abs(solve_super2_fixed(m, f, 0.5, 8.0, 1600, 200).at(0.5) - ref);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
  CHECK(e1 / e3 > 8.0);
}

TEST_CASE("exit problem: explicit solution of (1/2) u'' = u^2") {
  // u(x) = 3 / (x + 3)^2 on (-1, 1).
  const auto m = BranchingMechanism::quadratic(1.0);
  auto exact = [](double x) { return 3.0 / ((x + 3.0) * (x + 3.0)); };
  const auto s = solve_exit_shooting(m, 1.0, exact(-1.0), exact(1.0));
  const auto c = solve_exit_collocation(m, 1.0, exact(-1.0), exact(1.0));
  CHECK(s.slope == doctest::Approx(-6.0 / 8.0).epsilon(1e-7));
  for (double x = -1.0; x <= 1.0; x += 0.125) {
    CHECK(std::abs(s.at(x) - exact(x)) < 1e-8);
    CHECK(std::abs(c.at(x) - exact(x)) < 1e-10);
  }
}

TEST_CASE("shooting and collocation agree") {
  for (const auto& m : {BranchingMechanism::stable(1.0, 1.5),
                        BranchingMechanism(0.3, 0.5, {{1.0, 2.0}}, StableTail{0.5, 1.3})}) {
    for (double g : {0.5, 4.0, 20.0}) {
      const auto s = solve_exit_shooting(m, 1.0, g, g);
      const auto c = solve_exit_collocation(m, 1.0, g, g);
      double gap = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double x = -1.0 + 0.05 * i;
        gap = std::max(gap, std::abs(s.at(x) - c.at(x)));
      }
      CHECK(gap < 1e-6);
      // Symmetric data: minimum in the middle, below the boundary value.
      CHECK(s.at(0.0) < g);
      CHECK(s.at(0.3) == doctest::Approx(s.at(-0.3)).epsilon(1e-8));
    }
  }
}

}  // TEST_SUITE
