#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levytree {

/// Ulam-Harris label: the sequence of child indices (1-based) from the root.
using Label = std::vector<std::uint32_t>;

/// Finite rooted ordered tree, stored as the child counts of its vertices in
/// lexicographic (depth-first) order. Labels are materialized on demand.
class OrderedTree {
 public:
  /// The single-vertex tree {root}.
  OrderedTree();

  /// Validates that the counts describe exactly one complete tree.
  static OrderedTree from_child_counts(std::vector<std::uint32_t> counts);
  /// Builds the tree from a prefix-closed label set (any order).
  static OrderedTree from_labels(std::vector<Label> labels);
  /// Reconstructs the unique tree with the given height sequence.
  static OrderedTree from_height(std::span<const std::int32_t> height);
  /// Parses the comma-separated child-count form, e.g. "2,3,0,2,0,0,0,0".
  static OrderedTree parse(std::string_view text);

  std::size_t size() const { return counts_.size(); }
  const std::vector<std::uint32_t>& child_counts() const { return counts_; }
  std::uint32_t child_count(std::size_t n) const { return counts_[n]; }

  /// Labels in lexicographic order.
  std::vector<Label> labels() const;
  /// Parent index of every vertex in lexicographic order (root maps to itself).
  std::vector<std::size_t> parents() const;
  /// 1-based position of each vertex among its siblings (0 for the root).
  std::vector<std::uint32_t> sibling_ranks() const;
  std::int32_t max_height() const;
  /// Number of vertices per generation.
  std::vector<std::int64_t> generation_sizes() const;
  /// Number of leaves.
  std::size_t leaf_count() const;

  /// Comma-separated child counts.
  std::string to_string() const;

  friend bool operator==(const OrderedTree&, const OrderedTree&) = default;

 private:
  explicit OrderedTree(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {}

  std::vector<std::uint32_t> counts_;
};

/// Ordered sequence of trees.
using Forest = std::vector<OrderedTree>;

/// True iff the child counts form exactly one complete tree.
bool is_valid_tree_counts(std::span<const std::uint32_t> counts);

}  // namespace levytree
