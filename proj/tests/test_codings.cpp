#include <algorithm>
#include <random>

#include "doctest.h"
#include "levytree/codings.hpp"
#include "levytree/gw.hpp"
#include "levytree/rng.hpp"

using namespace levytree;

namespace {

// The eight-vertex tree drawn in the introduction of the theory.
const OrderedTree& figure_tree() {
  static const auto t = OrderedTree::parse("2,3,0,2,0,0,0,0");
  return t;
}

OrderedTree small_random_tree(std::mt19937_64& rng) {
  for (;;) {
    try {
      return sample_tree(OffspringDistribution::geometric_half(), rng, 5000);
    } catch (const NodeBudgetExceeded&) {
    }
  }
}

}  // namespace

TEST_SUITE("codings") {

TEST_CASE("figure tree codings") {
  const auto& t = figure_tree();
  CHECK(t.size() == 8);
  CHECK(height_of(t) == HeightSeq{0, 1, 2, 2, 3, 3, 2, 1});
  CHECK(lukasiewicz_of(t) == LukasiewiczWalk{0, 1, 3, 2, 3, 2, 1, 0, -1});
  CHECK(contour_of(t) == ContourSeq{0, 1, 2, 1, 2, 3, 2, 3, 2, 1, 2, 1, 0, 1, 0});
  CHECK(t.max_height() == 3);
  CHECK(t.leaf_count() == 5);
  CHECK(t.generation_sizes() == std::vector<std::int64_t>{1, 2, 3, 2});
}

TEST_CASE("labels round trip") {
  const auto& t = figure_tree();
  const auto labels = t.labels();
  REQUIRE(labels.size() == 8);
  CHECK(labels[0].empty());
  CHECK(labels[4] == Label{1, 2, 1});
  auto shuffled = labels;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(OrderedTree::from_labels(shuffled) == t);
}

TEST_CASE("invalid child counts are rejected") {
  CHECK_FALSE(is_valid_tree_counts(std::vector<std::uint32_t>{2, 0}));
  CHECK_FALSE(is_valid_tree_counts(std::vector<std::uint32_t>{0, 0}));
  CHECK(is_valid_tree_counts(std::vector<std::uint32_t>{1, 0}));
  CHECK_THROWS(OrderedTree::from_child_counts({1, 1}));
  CHECK_THROWS(OrderedTree::parse("2,x,0"));
}

TEST_CASE("height from walk: stack version equals the literal formula") {
  auto rng = make_stream(11, 0);
  const auto d = OffspringDistribution::geometric_half();
  for (int rep = 0; rep < 50; ++rep) {
    const auto walk = sample_walk(d, 400, rng);
    CHECK(height_from_walk(walk) == height_from_walk_literal(walk));
  }
}

TEST_CASE("bijections on random trees and forests") {
  auto rng = make_stream(12, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = small_random_tree(rng);
    const auto walk = lukasiewicz_of(t);
    CHECK(walk.back() == -1);
    CHECK(walk_to_forest(walk) == Forest{t});
    const auto h = height_of(t);
    CHECK(OrderedTree::from_height(h) == t);
    CHECK(height_from_walk(walk) == h);
    CHECK(contour_of(t) == contour_from_height(h));
    CHECK(contour_of(t).size() == 2 * t.size() - 1);
  }
  Forest forest;
  for (int i = 0; i < 20; ++i) forest.push_back(small_random_tree(rng));
  const auto walk = lukasiewicz_of(forest);
  CHECK(walk.back() == -20);
  CHECK(walk_to_forest(walk) == forest);
  CHECK(height_from_walk(walk) == height_of(forest));
}

TEST_CASE("contour clock") {
  const auto h = height_of(figure_tree());
  const auto k = contour_clock(h);
  for (std::size_t n = 0; n < h.size(); ++n) CHECK(k[n] == 2 * static_cast<std::int64_t>(n) - h[n]);
  // The contour sits at height H_n at time K_n.
  const auto c = contour_of(figure_tree());
  for (std::size_t n = 0; n < h.size(); ++n) CHECK(c[static_cast<std::size_t>(k[n])] == h[n]);
}

TEST_CASE("mirror reverses the contour and swaps sibling counts") {
  auto rng = make_stream(13, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = small_random_tree(rng);
    const auto m = mirror(t);
    auto c = contour_of(t);
    std::reverse(c.begin(), c.end());
    CHECK(contour_of(m) == c);
    CHECK(mirror(m) == t);
    const auto map = mirror_index_map(t);
    for (std::size_t n = 0; n < std::min<std::size_t>(t.size(), 64); ++n) {
      const auto a = exploration_at(t, n);
      const auto b = exploration_at(m, map[n]);
      CHECK(a.younger == b.older);
      CHECK(a.older == b.younger);
    }
  }
}

TEST_CASE("exploration of the figure tree") {
  // Vertex 5 is the second child of vertex (1,2).
  const auto e = exploration_at(figure_tree(), 5);
  CHECK(e.younger == std::vector<std::int64_t>{1, 1, 0});
  CHECK(e.older == std::vector<std::int64_t>{0, 1, 1});
}

TEST_CASE("reduced counts and excursions above a level") {
  const auto& t = figure_tree();
  CHECK(reduced_counts(t, 3) == ReducedCounts{1, 1, 1, 2});
  CHECK(reduced_counts(t, 2) == ReducedCounts{1, 1, 3});
  const auto h = height_of(t);
  CHECK(excursion_count_above(h, 1, 3) == 1);
  CHECK(excursion_count_above(h, 2, 3) == 1);
  CHECK(excursion_count_above(h, 3, 3) == 2);
  CHECK(excursion_count_above(h, 0, 2) == 1);
  CHECK(occupation_counts(h, 2, h.size()) == 3);

  auto rng = make_stream(14, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto r = small_random_tree(rng);
    const auto hr = height_of(r);
    const auto top = r.max_height();
    for (std::int32_t k = 0; k <= top; ++k) {
      CHECK(reduced_counts(r, top)[static_cast<std::size_t>(k)] == excursion_count_above(hr, k, top));
    }
  }
}

}  // TEST_SUITE
