#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levytree/tree.hpp"

namespace levytree {

/// H_n: generation of the n-th vertex in lexicographic order.
using HeightSeq = std::vector<std::int32_t>;
/// Contour at integer times: unit steps, starting and ending at 0.
using ContourSeq = std::vector<std::int32_t>;
/// Lukasiewicz walk V_0 = 0, V_{n+1} - V_n = k_{u(n)} - 1.
using LukasiewiczWalk = std::vector<std::int64_t>;

/// Younger / older sibling counts of the ancestors of the vertex visited at a
/// given step, indexed by generation 1..H_n. The vertex itself counts as its
/// own ancestor at generation H_n.
struct DiscreteExploration {
  std::vector<std::int64_t> younger;  // rho
  std::vector<std::int64_t> older;    // eta
};

/// Z^n_k for k = 0..n: vertices at generation k with descendants at generation n.
using ReducedCounts = std::vector<std::int64_t>;

HeightSeq height_of(const OrderedTree& tree);
HeightSeq height_of(const Forest& forest);

LukasiewiczWalk lukasiewicz_of(const OrderedTree& tree);
LukasiewiczWalk lukasiewicz_of(const Forest& forest);
/// Inverse of lukasiewicz_of: splits the walk at successive new minima.
Forest walk_to_forest(const LukasiewiczWalk& walk);

/// H_n = #{k < n : V_k = min_{k <= j <= n} V_j}, computed with a stack of
/// running minima in linear time. Returns one value per step of the walk
/// (walk.size() - 1 values).
HeightSeq height_from_walk(std::span<const std::int64_t> walk);
/// Literal quadratic-time evaluation of the same formula; reference only.
HeightSeq height_from_walk_literal(std::span<const std::int64_t> walk);

/// Depth-first contour of the tree at integer times 0..2(#T-1).
ContourSeq contour_of(const OrderedTree& tree);
/// Contour rebuilt from the height sequence through K_n = 2n - H_n.
ContourSeq contour_from_height(std::span<const std::int32_t> height);

/// Tree with every child list reversed.
OrderedTree mirror(const OrderedTree& tree);
/// Lexicographic index in mirror(tree) of each vertex of tree.
std::vector<std::size_t> mirror_index_map(const OrderedTree& tree);

DiscreteExploration exploration_at(const OrderedTree& tree, std::size_t n);

/// Ancestor marking on the tree.
ReducedCounts reduced_counts(const OrderedTree& tree, std::int32_t level);
/// Number of excursions of H above level k that hit level `target`
/// (runs that start at a visit of k and end before the next visit of a
/// level <= k).
std::int64_t excursion_count_above(std::span<const std::int32_t> height, std::int32_t k,
                                   std::int32_t target);

/// #{j < horizon : H_j = level}.
std::int64_t occupation_counts(std::span<const std::int32_t> height, std::int32_t level,
                               std::size_t horizon);

/// K_n = 2n - H_n.
std::vector<std::int64_t> contour_clock(std::span<const std::int32_t> height);

}  // namespace levytree
