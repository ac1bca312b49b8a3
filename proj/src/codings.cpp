#include "levytree/codings.hpp"

#include <algorithm>
#include <stdexcept>

namespace levytree {

namespace {

std::vector<std::vector<std::size_t>> children_lists(const OrderedTree& tree) {
  const auto parent = tree.parents();
  std::vector<std::vector<std::size_t>> children(tree.size());
  for (std::size_t n = 1; n < tree.size(); ++n) children[parent[n]].push_back(n);
  return children;
}

}  // namespace

HeightSeq height_of(const OrderedTree& tree) {
  const auto parent = tree.parents();
  HeightSeq h(tree.size(), 0);
  for (std::size_t n = 1; n < tree.size(); ++n) h[n] = h[parent[n]] + 1;
  return h;
}

HeightSeq height_of(const Forest& forest) {
  HeightSeq out;
  for (const auto& t : forest) {
    auto h = height_of(t);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

LukasiewiczWalk lukasiewicz_of(const OrderedTree& tree) { return lukasiewicz_of(Forest{tree}); }

LukasiewiczWalk lukasiewicz_of(const Forest& forest) {
  LukasiewiczWalk walk{0};
  for (const auto& t : forest) {
    for (auto c : t.child_counts()) walk.push_back(walk.back() + static_cast<std::int64_t>(c) - 1);
  }
  return walk;
}

Forest walk_to_forest(const LukasiewiczWalk& walk) {
  if (walk.empty() || walk[0] != 0) throw std::invalid_argument("walk_to_forest: walk must start at 0");
  Forest forest;
  std::vector<std::uint32_t> counts;
  std::int64_t floor = 0;  // current running minimum
  for (std::size_t i = 1; i < walk.size(); ++i) {
    const std::int64_t step = walk[i] - walk[i - 1];
    if (step < -1) throw std::invalid_argument("walk_to_forest: increment below -1");
    counts.push_back(static_cast<std::uint32_t>(step + 1));
    if (walk[i] < floor) {
      floor = walk[i];
      forest.push_back(OrderedTree::from_child_counts(std::move(counts)));
      counts.clear();
    }
  }
  if (!counts.empty()) throw std::invalid_argument("walk_to_forest: last tree is incomplete");
  return forest;
}

HeightSeq height_from_walk(std::span<const std::int64_t> walk) {
  if (walk.empty()) return {};
  HeightSeq h(walk.size() - 1);
  std::vector<std::int64_t> minima;  // values V_k of indices kept on the stack
  minima.reserve(64);
  for (std::size_t n = 0; n + 1 < walk.size(); ++n) {
    const auto vn = walk[n];
    while (!minima.empty() && minima.back() > vn) minima.pop_back();
    h[n] = static_cast<std::int32_t>(minima.size());
    minima.push_back(vn);
  }
  return h;
}

HeightSeq height_from_walk_literal(std::span<const std::int64_t> walk) {
  if (walk.empty()) return {};
  HeightSeq h(walk.size() - 1, 0);
  for (std::size_t n = 0; n + 1 < walk.size(); ++n) {
    std::int32_t count = 0;
    for (std::size_t k = 0; k < n; ++k) {
      std::int64_t inf = walk[k];
      for (std::size_t j = k; j <= n; ++j) inf = std::min(inf, walk[j]);
      if (walk[k] == inf) ++count;
    }
    h[n] = count;
  }
  return h;
}

ContourSeq contour_of(const OrderedTree& tree) {
  const auto children = children_lists(tree);
  ContourSeq c{0};
  c.reserve(2 * tree.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};  // (vertex, next child)
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children[v].size()) {
      const auto child = children[v][next++];
      stack.emplace_back(child, 0);
      c.push_back(static_cast<std::int32_t>(stack.size() - 1));
    } else {
      stack.pop_back();
      if (!stack.empty()) c.push_back(static_cast<std::int32_t>(stack.size() - 1));
    }
  }
  return c;
}

std::vector<std::int64_t> contour_clock(std::span<const std::int32_t> height) {
  std::vector<std::int64_t> k(height.size());
  for (std::size_t n = 0; n < height.size(); ++n) k[n] = 2 * static_cast<std::int64_t>(n) - height[n];
  return k;
}

ContourSeq contour_from_height(std::span<const std::int32_t> height) {
  if (height.empty()) return {};
  const auto k = contour_clock(height);
  const std::size_t last = height.size() - 1;
  const std::int64_t end = k[last] + height[last];
  ContourSeq c(static_cast<std::size_t>(end) + 1, 0);
  std::size_t n = 0;
  for (std::int64_t t = 0; t <= end; ++t) {
    while (n < last && t >= k[n + 1]) ++n;
    std::int64_t value;
    if (n < last && t >= k[n + 1] - 1) {
      value = height[n + 1] - (k[n + 1] - t);
    } else {
      value = height[n] - (t - k[n]);
    }
    c[static_cast<std::size_t>(t)] = static_cast<std::int32_t>(std::max<std::int64_t>(value, 0));
  }
  return c;
}

std::vector<std::size_t> mirror_index_map(const OrderedTree& tree) {
  const auto children = children_lists(tree);
  std::vector<std::size_t> index(tree.size());
  std::size_t next_index = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    index[v] = next_index++;
    // Push in original order so the last child is visited first.
    for (auto c : children[v]) stack.push_back(c);
  }
  return index;
}

OrderedTree mirror(const OrderedTree& tree) {
  const auto index = mirror_index_map(tree);
  std::vector<std::uint32_t> counts(tree.size());
  for (std::size_t n = 0; n < tree.size(); ++n) counts[index[n]] = tree.child_count(n);
  return OrderedTree::from_child_counts(std::move(counts));
}

DiscreteExploration exploration_at(const OrderedTree& tree, std::size_t n) {
  if (n >= tree.size()) throw std::out_of_range("exploration_at: step out of range");
  const auto parent = tree.parents();
  const auto rank = tree.sibling_ranks();
  std::vector<std::size_t> line;
  for (auto v = n; v != 0; v = parent[v]) line.push_back(v);
  DiscreteExploration out;
  out.younger.resize(line.size());
  out.older.resize(line.size());
  for (std::size_t g = 0; g < line.size(); ++g) {
    const auto v = line[line.size() - 1 - g];
    out.younger[g] = static_cast<std::int64_t>(tree.child_count(parent[v])) - rank[v];
    out.older[g] = static_cast<std::int64_t>(rank[v]) - 1;
  }
  return out;
}

ReducedCounts reduced_counts(const OrderedTree& tree, std::int32_t level) {
  if (level < 0) throw std::domain_error("reduced_counts: level must be >= 0");
  const auto parent = tree.parents();
  const auto h = height_of(tree);
  std::vector<char> marked(tree.size(), 0);
  for (std::size_t n = 0; n < tree.size(); ++n) {
    if (h[n] != level) continue;
    for (auto v = n; !marked[v]; v = parent[v]) {
      marked[v] = 1;
      if (v == 0) break;
    }
  }
  ReducedCounts z(static_cast<std::size_t>(level) + 1, 0);
  for (std::size_t n = 0; n < tree.size(); ++n) {
    if (marked[n] && h[n] <= level) ++z[static_cast<std::size_t>(h[n])];
  }
  return z;
}

std::int64_t excursion_count_above(std::span<const std::int32_t> height, std::int32_t k,
                                   std::int32_t target) {
  if (k < 0 || target < k) throw std::domain_error("excursion_count_above: need 0 <= k <= target");
  std::int64_t count = 0;
  std::size_t i = 0;
  while (i < height.size()) {
    if (height[i] != k) {
      ++i;
      continue;
    }
    std::int32_t peak = k;
    std::size_t j = i + 1;
    while (j < height.size() && height[j] > k) peak = std::max(peak, height[j++]);
    if (peak >= target) ++count;
    i = j;
  }
  return count;
}

std::int64_t occupation_counts(std::span<const std::int32_t> height, std::int32_t level,
                               std::size_t horizon) {
  horizon = std::min(horizon, height.size());
  return std::count(height.begin(), height.begin() + static_cast<std::ptrdiff_t>(horizon), level);
}

}  // namespace levytree
