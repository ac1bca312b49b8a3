#include <cmath>
#include <random>

#include "doctest.h"
#include "levytree/parallel.hpp"
#include "levytree/rng.hpp"
#include "levytree/stats.hpp"

using namespace levytree;

TEST_SUITE("stats") {

TEST_CASE("KS statistic by hand") {
  // Uniform reference, samples 0.1 and 0.6: sup at x = 0.6 from the left, |0.5 - 0.6|,
  // and at x = 0.1 from the right, |0.5 - 0.1|.
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic({0.1, 0.6}, uniform) == doctest::Approx(0.4));
  // Atom at 0: a sample of zeros against F = 1/2 + x/2 on [0,1].
  auto atom = [](double x) { return x < 0.0 ? 0.0 : std::min(1.0, 0.5 + 0.5 * x); };
  CHECK(ks_statistic({0.0, 0.0}, atom) == doctest::Approx(0.5));
  CHECK_THROWS(ks_statistic({}, uniform));
}

TEST_CASE("KS statistic scales like n^{-1/2} on exact samples") {
  auto rng = make_stream(101, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(40000);
  for (auto& v : x) v = u(rng);
  CHECK(ks_statistic(x, [](double v) { return v; }) < 1.63 / std::sqrt(40000.0));
}

TEST_CASE("chi-square p-values") {
  // One degree of freedom, statistic 3.841: p = 0.05.
  const std::vector<double> obs{50.0 + std::sqrt(3.841 * 25.0), 50.0 - std::sqrt(3.841 * 25.0)};
  const std::vector<double> exp{50.0, 50.0};
  const auto c = chi_square(obs, exp);
  CHECK(c.dof == 1);
  CHECK(c.stat == doctest::Approx(2 * 3.841 * 25.0 / 50.0));
  CHECK(chi_square(std::vector<double>{30, 70}, std::vector<double>{50, 50}).p_value < 1e-4);
  const auto fitted = chi_square(std::vector<double>{10, 10, 10}, std::vector<double>{10, 10, 10}, 1);
  CHECK(fitted.dof == 1);
  CHECK(fitted.p_value == doctest::Approx(1.0));
  CHECK(std::isinf(chi_square(std::vector<double>{1, 1}, std::vector<double>{2, 0}).stat));
}

TEST_CASE("chi-square p-value for three degrees of freedom") {
  // P[chi2_3 > 7.815] = 0.05.
  const std::vector<double> exp{100, 100, 100, 100};
  const double d = std::sqrt(7.815 * 100 / 4);
  const std::vector<double> obs{100 + d, 100 - d, 100 + d, 100 - d};
  CHECK(chi_square(obs, exp).p_value == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("moments, quantiles, regression") {
  Moments m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  CHECK(m.mean() == 2.5);
  CHECK(m.variance() == doctest::Approx(5.0 / 3.0));
  CHECK(m.standard_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
  Moments a, b;
  a.add(1.0);
  b.add(3.0);
  a.merge(b);
  CHECK(a.mean() == 2.0);
  CHECK(quantile({3.0, 1.0, 2.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({3.0, 1.0, 2.0}, 1.0) == 3.0);
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(half_normal_cdf(-1.0, 2.0) == 0.0);
  CHECK(half_normal_cdf(std::sqrt(2.0) * 1.959964, 2.0) == doctest::Approx(0.95).epsilon(1e-6));
}

TEST_CASE("Laplace gap") {
  const std::vector<double> s{0.0, 0.0};
  const std::vector<double> lams{0.5, 1.0};
  CHECK(laplace_gap(s, lams, [](double l) { return std::exp(-l); }) == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("chunked runs are independent of the worker count") {
  auto body = [](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    double s = 0.0;
    for (auto i = b; i < e; ++i) s += std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return s;
  };
  const auto one = run_chunked<double>(1000, 37, 5, 1, body);
  const auto four = run_chunked<double>(1000, 37, 5, 4, body);
  CHECK(one == four);
  CHECK(one.size() == 28);
  CHECK(make_stream(5, 0)() != make_stream(5, 1)());
  CHECK(make_stream(5, 2)() == make_stream(5, 2)());
  CHECK_THROWS(run_chunked<int>(10, 2, 1, 2, [](std::int64_t b, std::int64_t, std::mt19937_64&) -> int {
    if (b == 4) throw std::runtime_error("chunk failure");
    return 0;
  }));
}

}  // TEST_SUITE
