#include <cmath>

#include "doctest.h"
#include "levytree/rng.hpp"
#include "levytree/scaling.hpp"

using namespace levytree;

TEST_SUITE("scaling") {

TEST_CASE("occupation counts equal generation sizes") {
  const Forest f{OrderedTree::parse("2,3,0,2,0,0,0,0"), OrderedTree::parse("0"), OrderedTree::parse("1,1,0")};
  CHECK(discrete_ray_knight_identity(3, f));
  CHECK_THROWS(discrete_ray_knight_identity(2, f));
  const auto r = discrete_ray_knight_experiment(OffspringDistribution::stable(1.5), 10, 200, RunContext{91, 1});
  CHECK(r.pass);
  CHECK(r.statistic == 0.0);
}

TEST_CASE("extinction law, geometric offspring") {
  // g_n(0) = n / (n + 1), so the statistic is |(p/(p+1))^p - e^{-1}|.
  const auto r = extinction_law(OffspringDistribution::geometric_half(), 500, 1.0);
  CHECK(r.statistic == doctest::Approx(std::abs(std::pow(500.0 / 501.0, 500) - std::exp(-1.0))).epsilon(1e-9));
  CHECK(r.pass);
}

TEST_CASE("extinction law, stable offspring: target and slow convergence") {
  // v(a) = (c (g-1) a)^{-1/(g-1)} with c = 1/g: v(1) = 9 for g = 3/2.
  const auto d = OffspringDistribution::stable(1.5);
  const auto small = extinction_law(d, 500, 1.0, 1.0);
  CHECK(small.statistics["target"].get<double>() == doctest::Approx(std::exp(-9.0)).epsilon(1e-8));
  const auto large = extinction_law(d, 1'000'000, 1.0, 1.0);
  CHECK(large.statistic < small.statistic);
  CHECK(large.statistic < 1e-4);
}

TEST_CASE("rescaled heights do not depend on the worker count") {
  const auto d = OffspringDistribution::geometric_half();
  const auto a = rescaled_height_samples(d, 20, 1.0, 300, RunContext{92, 1});
  const auto b = rescaled_height_samples(d, 20, 1.0, 300, RunContext{92, 3});
  CHECK(a == b);
  const auto c = rescaled_height_samples(d, 20, 1.0, 300, RunContext{93, 1});
  CHECK(a != c);
}

TEST_CASE("Holder estimate for the Brownian case") {
  const auto r = holder_exponent_estimate(OffspringDistribution::geometric_half(), 300, 4, RunContext{94, 1});
  CHECK(std::abs(r.statistics["estimate"].get<double>() - 0.5) < 0.15);
}

TEST_CASE("Ray-Knight Laplace transform at small p") {
  const auto r = ray_knight_laplace(OffspringDistribution::geometric_half(), 100, 1.0, 1.0, 3000, RunContext{95, 1});
  CHECK(r.statistics["target"].get<double>() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(r.pass);
}

}  // TEST_SUITE
