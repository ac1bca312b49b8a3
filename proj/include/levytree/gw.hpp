#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "levytree/codings.hpp"
#include "levytree/offspring.hpp"
#include "levytree/tree.hpp"

namespace levytree {

inline constexpr std::int64_t kDefaultNodeBudget = 100'000'000;

/// Thrown when a sampler would exceed its vertex budget. Critical trees have
/// infinite mean size, so every unbounded sampler carries one.
class NodeBudgetExceeded : public std::runtime_error {
 public:
  explicit NodeBudgetExceeded(std::int64_t budget)
      : std::runtime_error("node budget of " + std::to_string(budget) + " vertices exceeded"),
        budget_(budget) {}
  std::int64_t budget() const { return budget_; }

 private:
  std::int64_t budget_;
};

/// Galton-Watson tree by depth-first expansion: offspring counts are drawn in
/// lexicographic order until the Lukasiewicz walk first hits -1.
OrderedTree sample_tree(const OffspringDistribution& d, std::mt19937_64& rng,
                        std::int64_t budget = kDefaultNodeBudget);

/// Same law, drawn generation by generation and then relabelled in
/// lexicographic order. With max_generation >= 0 the vertices of that
/// generation are left childless, which gives the exact law of the tree
/// restricted to the first max_generation generations.
OrderedTree sample_tree_by_generations(const OffspringDistribution& d, std::mt19937_64& rng,
                                       std::int64_t budget = kDefaultNodeBudget,
                                       std::int32_t max_generation = -1);

Forest sample_forest(const OffspringDistribution& d, std::size_t count, std::mt19937_64& rng,
                     std::int64_t budget = kDefaultNodeBudget);

/// V_0 = 0 followed by `steps` i.i.d. increments xi - 1: the Lukasiewicz walk
/// of an infinite i.i.d. forest, read up to time `steps`.
LukasiewiczWalk sample_walk(const OffspringDistribution& d, std::int64_t steps,
                            std::mt19937_64& rng);

/// 1 - g_n(0): probability that the height reaches n.
double height_acceptance(const OffspringDistribution& d, std::int32_t n);

struct ConditionedSample {
  OrderedTree tree;
  std::int64_t attempts = 0;
};

/// Tree conditioned on height >= n, by rejection. If `truncate` is set, the
/// returned tree is cut at generation n (enough for any statistic that only
/// looks at levels <= n) and rejected trees never grow past it.
ConditionedSample sample_conditioned_height(const OffspringDistribution& d, std::int32_t n,
                                            std::mt19937_64& rng, bool truncate = false,
                                            std::int64_t budget = kDefaultNodeBudget);

/// Whether n-1 is a sum of n values from the support of mu.
bool size_conditioning_feasible(const OffspringDistribution& d, std::int64_t n);

/// Cycle lemma: for increments summing to -1, the index where the unique
/// rotation that first hits -1 at the last step begins.
std::size_t first_passage_rotation(const std::vector<std::int64_t>& increments);

/// Tree conditioned to have exactly n vertices. Throws std::domain_error when
/// the conditioning event is empty.
ConditionedSample sample_conditioned_size(const OffspringDistribution& d, std::int64_t n,
                                          std::mt19937_64& rng,
                                          std::int64_t max_attempts = 100'000'000);

/// Y_0 = start, Y_{k+1} = sum of Y_k i.i.d. offspring counts; returns
/// Y_0..Y_generations.
std::vector<std::int64_t> generation_process(const OffspringDistribution& d, std::int64_t start,
                                             std::int64_t generations, std::mt19937_64& rng);

}  // namespace levytree
