#include "levytree/gw.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace levytree {

OrderedTree sample_tree(const OffspringDistribution& d, std::mt19937_64& rng, std::int64_t budget) {
  std::vector<std::uint32_t> counts;
  std::int64_t pending = 1;
  while (pending > 0) {
    if (static_cast<std::int64_t>(counts.size()) >= budget) throw NodeBudgetExceeded(budget);
    const auto k = d.sample(rng);
    counts.push_back(static_cast<std::uint32_t>(k));
    pending += k - 1;
  }
  return OrderedTree::from_child_counts(std::move(counts));
}

OrderedTree sample_tree_by_generations(const OffspringDistribution& d, std::mt19937_64& rng,
                                       std::int64_t budget, std::int32_t max_generation) {
  // Breadth-first child counts; generation g occupies [level_start[g], level_start[g+1]).
  std::vector<std::uint32_t> bfs{};
  std::size_t level_begin = 0, level_end = 1;
  std::int64_t total = 1;
  bfs.reserve(64);
  for (std::int32_t g = 0; level_begin < level_end; ++g) {
    std::int64_t next = 0;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      std::uint32_t k = 0;
      if (max_generation < 0 || g < max_generation) k = static_cast<std::uint32_t>(d.sample(rng));
      bfs.push_back(k);
      next += k;
    }
    total += next;
    if (total > budget) throw NodeBudgetExceeded(budget);
    level_begin = level_end;
    level_end += static_cast<std::size_t>(next);
  }

  std::vector<std::size_t> first_child(bfs.size());
  std::size_t offset = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    first_child[i] = offset;
    offset += bfs[i];
  }
  std::vector<std::uint32_t> counts;
  counts.reserve(bfs.size());
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    counts.push_back(bfs[v]);
    for (std::size_t j = bfs[v]; j-- > 0;) stack.push_back(first_child[v] + j);
  }
  return OrderedTree::from_child_counts(std::move(counts));
}

Forest sample_forest(const OffspringDistribution& d, std::size_t count, std::mt19937_64& rng,
                     std::int64_t budget) {
  Forest forest;
  forest.reserve(count);
  std::int64_t used = 0;
  for (std::size_t i = 0; i < count; ++i) {
    forest.push_back(sample_tree(d, rng, budget - used));
    used += static_cast<std::int64_t>(forest.back().size());
  }
  return forest;
}

LukasiewiczWalk sample_walk(const OffspringDistribution& d, std::int64_t steps, std::mt19937_64& rng) {
  LukasiewiczWalk walk(static_cast<std::size_t>(steps) + 1, 0);
  for (std::int64_t i = 0; i < steps; ++i) {
    walk[static_cast<std::size_t>(i) + 1] = walk[static_cast<std::size_t>(i)] + d.sample(rng) - 1;
  }
  return walk;
}

double height_acceptance(const OffspringDistribution& d, std::int32_t n) {
  return 1.0 - d.gf_iterate(n, 0.0);
}

ConditionedSample sample_conditioned_height(const OffspringDistribution& d, std::int32_t n,
                                            std::mt19937_64& rng, bool truncate,
                                            std::int64_t budget) {
  if (n < 0) throw std::domain_error("sample_conditioned_height: n must be >= 0");
  if (n > 0) {
    const double acc = height_acceptance(d, n);
    if (acc <= 0.0) throw std::domain_error("sample_conditioned_height: height n is unreachable");
    if (acc < 1e-4) {
      std::clog << "warning: height conditioning accepts with probability " << acc
                << "; expect about " << 1.0 / acc << " retries\n";
    }
  }
  ConditionedSample out;
  for (;;) {
    ++out.attempts;
    auto tree = truncate ? sample_tree_by_generations(d, rng, budget, n) : sample_tree(d, rng, budget);
    if (tree.max_height() >= n) {
      out.tree = std::move(tree);
      return out;
    }
  }
}

bool size_conditioning_feasible(const OffspringDistribution& d, std::int64_t n) {
  if (n < 1) return false;
  if (d.pmf(0) <= 0.0) return false;
  const std::int64_t target = n - 1;
  if (target == 0) return true;
  if (d.pmf(1) > 0.0) return true;
  // Any representation of n-1 by positive parts has at most n-1 parts, so
  // padding with zeros always completes it to n values.
  std::vector<std::int64_t> parts;
  for (std::int64_t k = 2; k <= target; ++k) {
    if (d.pmf(k) > 0.0) parts.push_back(k);
  }
  std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
  reach[0] = 1;
  for (std::int64_t s = 1; s <= target; ++s) {
    for (auto k : parts) {
      if (k > s) break;
      if (reach[static_cast<std::size_t>(s - k)]) {
        reach[static_cast<std::size_t>(s)] = 1;
        break;
      }
    }
  }
  return reach[static_cast<std::size_t>(target)] != 0;
}

std::size_t first_passage_rotation(const std::vector<std::int64_t>& increments) {
  std::int64_t sum = 0, best = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    sum += increments[i];
    if (i == 0 || sum < best) {
      best = sum;
      arg = i;
    }
  }
  if (sum != -1) throw std::invalid_argument("first_passage_rotation: increments must sum to -1");
  return (arg + 1) % increments.size();
}

namespace {

OrderedTree rotate_to_tree(const std::vector<std::int64_t>& increments) {
  const auto start = first_passage_rotation(increments);
  const auto n = increments.size();
  std::vector<std::uint32_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    counts[i] = static_cast<std::uint32_t>(increments[(start + i) % n] + 1);
  }
  return OrderedTree::from_child_counts(std::move(counts));
}

}  // namespace

ConditionedSample sample_conditioned_size(const OffspringDistribution& d, std::int64_t n,
                                          std::mt19937_64& rng, std::int64_t max_attempts) {
  if (!size_conditioning_feasible(d, n)) {
    throw std::domain_error("sample_conditioned_size: no tree with " + std::to_string(n) +
                            " vertices has positive probability");
  }
  ConditionedSample out;
  std::vector<std::int64_t> inc(static_cast<std::size_t>(n));

  if (d.kind() == OffspringDistribution::Kind::geometric) {
    // The sum of n Geometric(1/2) variables is NegativeBinomial(n, 1/2) and,
    // given the sum, the vector is uniform over weak compositions.
    std::negative_binomial_distribution<std::int64_t> total(n, 0.5);
    while (total(rng) != n - 1) {
      if (++out.attempts >= max_attempts) throw std::runtime_error("sample_conditioned_size: too many retries");
    }
    ++out.attempts;
    // Stars and bars: n-1 bars among 2n-2 slots.
    const std::int64_t slots = 2 * n - 2;
    std::vector<std::int64_t> all(static_cast<std::size_t>(slots));
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::int64_t> bars;
    bars.reserve(static_cast<std::size_t>(n - 1));
    std::sample(all.begin(), all.end(), std::back_inserter(bars), n - 1, rng);
    std::int64_t prev = -1;
    for (std::int64_t i = 0; i < n - 1; ++i) {
      const auto b = bars[static_cast<std::size_t>(i)];
      inc[static_cast<std::size_t>(i)] = (b - prev - 1) - 1;
      prev = b;
    }
    inc[static_cast<std::size_t>(n - 1)] = (slots - prev - 1) - 1;
    out.tree = rotate_to_tree(inc);
    return out;
  }

  for (;;) {
    if (++out.attempts > max_attempts) throw std::runtime_error("sample_conditioned_size: too many retries");
    std::int64_t sum = 0;
    for (auto& x : inc) {
      x = d.sample(rng) - 1;
      sum += x;
    }
    if (sum == -1) break;
  }
  out.tree = rotate_to_tree(inc);
  return out;
}

std::vector<std::int64_t> generation_process(const OffspringDistribution& d, std::int64_t start,
                                             std::int64_t generations, std::mt19937_64& rng) {
  std::vector<std::int64_t> y{start};
  y.reserve(static_cast<std::size_t>(generations) + 1);
  for (std::int64_t g = 0; g < generations; ++g) {
    const auto m = y.back();
    std::int64_t next = 0;
    if (m > 0 && d.kind() == OffspringDistribution::Kind::geometric) {
      next = std::negative_binomial_distribution<std::int64_t>(m, 0.5)(rng);
    } else {
      for (std::int64_t i = 0; i < m; ++i) next += d.sample(rng);
    }
    y.push_back(next);
  }
  return y;
}

}  // namespace levytree
