#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "doctest.h"
#include "levytree/gw.hpp"
#include "levytree/rng.hpp"
#include "levytree/stats.hpp"

using namespace levytree;

namespace {

// Every child-count sequence of an ordered tree with n vertices.
std::vector<std::vector<std::uint32_t>> all_trees(int n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  std::function<void(int)> rec = [&](int pending) {
    const int left = n - static_cast<int>(cur.size());
    if (pending == 0) {
      if (left == 0) out.push_back(cur);
      return;
    }
    if (pending > left) return;
    for (int k = 0; k + pending - 1 <= left - 1; ++k) {
      cur.push_back(static_cast<std::uint32_t>(k));
      rec(pending - 1 + k);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

double tree_probability(const OffspringDistribution& d, const std::vector<std::uint32_t>& counts) {
  double p = 1.0;
  for (auto k : counts) p *= d.pmf(k);
  return p;
}

// Chi-square p-value of conditioned samples against the enumerated law.
double enumeration_p_value(const OffspringDistribution& d, int n, int reps, std::uint64_t seed) {
  const auto trees = all_trees(n);
  std::map<std::string, std::size_t> index;
  std::vector<double> expected(trees.size());
  double total = 0.0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    index[OrderedTree::from_child_counts(trees[i]).to_string()] = i;
    expected[i] = tree_probability(d, trees[i]);
    total += expected[i];
  }
  for (auto& e : expected) e *= reps / total;
  std::vector<double> observed(trees.size(), 0.0);
  auto rng = make_stream(seed, 0);
  for (int r = 0; r < reps; ++r) {
    const auto t = sample_conditioned_size(d, n, rng).tree;
    observed.at(index.at(t.to_string())) += 1.0;
  }
  return chi_square(observed, expected).p_value;
}

double catalan(int n) {
  double c = 1.0;
  for (int k = 0; k < n; ++k) c = c * 2.0 * (2 * k + 1) / (k + 2);
  return c;
}

}  // namespace

TEST_SUITE("gw") {

TEST_CASE("enumeration helper counts Catalan numbers") {
  for (int n = 1; n <= 8; ++n) CHECK(static_cast<double>(all_trees(n).size()) == doctest::Approx(catalan(n - 1)));
}

TEST_CASE("size-conditioned trees against brute-force enumeration") {
  CHECK(enumeration_p_value(OffspringDistribution::geometric_half(), 5, 14000, 21) > 1e-3);
  CHECK(enumeration_p_value(OffspringDistribution::geometric_half(), 7, 40000, 22) > 1e-3);
  CHECK(enumeration_p_value(OffspringDistribution::stable(1.5), 5, 14000, 23) > 1e-3);
  CHECK(enumeration_p_value(OffspringDistribution::custom({0.3, 0.45, 0.25}), 6, 14000, 24) > 1e-3);
}

TEST_CASE("size conditioning feasibility") {
  const auto binary = OffspringDistribution::custom({0.5, 0.0, 0.5});
  CHECK(size_conditioning_feasible(binary, 5));
  CHECK_FALSE(size_conditioning_feasible(binary, 4));
  auto rng = make_stream(25, 0);
  CHECK_THROWS_AS(sample_conditioned_size(binary, 4, rng), std::domain_error);
  const auto t = sample_conditioned_size(binary, 9, rng).tree;
  CHECK(t.size() == 9);
  CHECK(t.leaf_count() == 5);
}

TEST_CASE("cycle lemma rotation") {
  const std::vector<std::int64_t> inc{-1, 1, -1, 0, -1, 1};
  const auto start = first_passage_rotation(inc);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    s += inc[(start + i) % inc.size()];
    if (i + 1 < inc.size()) CHECK(s >= 0);
  }
  CHECK(s == -1);
  CHECK_THROWS(first_passage_rotation({1, -1}));
}

TEST_CASE("unconditioned size law of both samplers") {
  // P[#T = n] = Catalan(n-1) 2^{-(2n-1)} for geometric offspring.
  const auto d = OffspringDistribution::geometric_half();
  const int reps = 40000, bins = 6;
  std::vector<double> expected(bins + 1, 0.0);
  double head = 0.0;
  for (int n = 1; n <= bins; ++n) {
    expected[n - 1] = catalan(n - 1) * std::ldexp(1.0, -(2 * n - 1));
    head += expected[n - 1];
  }
  expected[bins] = 1.0 - head;
  for (auto& e : expected) e *= reps;
  for (int method = 0; method < 2; ++method) {
    auto rng = make_stream(26, static_cast<std::uint64_t>(method));
    std::vector<double> observed(bins + 1, 0.0);
    for (int r = 0; r < reps; ++r) {
      std::size_t size = 0;
      try {
        size = (method == 0 ? sample_tree(d, rng, 100000) : sample_tree_by_generations(d, rng, 100000)).size();
      } catch (const NodeBudgetExceeded&) {
        size = bins + 1;
      }
      observed[std::min<std::size_t>(size, bins + 1) - 1] += 1.0;
    }
    CHECK(chi_square(observed, expected).p_value > 1e-3);
  }
}

TEST_CASE("generation-by-generation sampler keeps the lexicographic order") {
  auto rng = make_stream(27, 0);
  const auto d = OffspringDistribution::geometric_half();
  for (int r = 0; r < 200; ++r) {
    OrderedTree t;
    try {
      t = sample_tree_by_generations(d, rng, 100000, 4);
    } catch (const NodeBudgetExceeded&) {
      continue;
    }
    CHECK(t.max_height() <= 4);
    CHECK(OrderedTree::from_height(height_of(t)) == t);
  }
}

TEST_CASE("budget is enforced") {
  auto rng = make_stream(28, 0);
  int hits = 0;
  for (int r = 0; r < 200; ++r) {
    try {
      sample_tree(OffspringDistribution::geometric_half(), rng, 3);
    } catch (const NodeBudgetExceeded& e) {
      CHECK(e.budget() == 3);
      ++hits;
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("height conditioning") {
  const auto d = OffspringDistribution::geometric_half();
  for (int n = 1; n <= 6; ++n) CHECK(height_acceptance(d, n) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));

  auto rng = make_stream(29, 0);
  // Given height >= 1 the root degree is geometric: P[k] = 2^{-k}, k >= 1.
  const int reps = 20000, bins = 6;
  std::vector<double> observed(bins + 1, 0.0), expected(bins + 1, 0.0);
  for (int k = 1; k <= bins; ++k) expected[k - 1] = reps * std::ldexp(1.0, -k);
  expected[bins] = reps * std::ldexp(1.0, -bins);
  std::int64_t attempts = 0;
  for (int r = 0; r < reps; ++r) {
    const auto s = sample_conditioned_height(d, 1, rng, true);
    attempts += s.attempts;
    const auto k = std::min<std::uint32_t>(s.tree.child_count(0), bins + 1);
    observed[k - 1] += 1.0;
  }
  CHECK(chi_square(observed, expected).p_value > 1e-3);
  CHECK(static_cast<double>(attempts) / reps == doctest::Approx(2.0).epsilon(0.05));

  for (int r = 0; r < 100; ++r) {
    const auto s = sample_conditioned_height(d, 5, rng, true);
    CHECK(s.tree.max_height() == 5);
  }
}

TEST_CASE("generation process moments") {
  auto rng = make_stream(30, 0);
  for (const auto& d : {OffspringDistribution::geometric_half(), OffspringDistribution::custom({0.25, 0.5, 0.25})}) {
    Moments m;
    for (int r = 0; r < 20000; ++r) {
      const auto y = generation_process(d, 10, 1, rng);
      REQUIRE(y.size() == 2);
      CHECK(y[0] == 10);
      m.add(static_cast<double>(y[1]));
    }
    CHECK(std::abs(m.mean() - 10.0) < 4 * m.standard_error());
    CHECK(m.variance() == doctest::Approx(10 * d.variance()).epsilon(0.05));
  }
}

TEST_CASE("walk increments") {
  auto rng = make_stream(31, 0);
  const auto w = sample_walk(OffspringDistribution::geometric_half(), 1000, rng);
  REQUIRE(w.size() == 1001);
  CHECK(w[0] == 0);
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] - w[i - 1] >= -1);
}

}  // TEST_SUITE
