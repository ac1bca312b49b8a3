#include "levytree/tree.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <stdexcept>

namespace levytree {

bool is_valid_tree_counts(std::span<const std::uint32_t> counts) {
  std::int64_t pending = 1;
  for (auto c : counts) {
    if (pending == 0) return false;
    pending += static_cast<std::int64_t>(c) - 1;
  }
  return pending == 0;
}

OrderedTree::OrderedTree() : counts_{0} {}

OrderedTree OrderedTree::from_child_counts(std::vector<std::uint32_t> counts) {
  if (!is_valid_tree_counts(counts)) {
    throw std::invalid_argument("OrderedTree: child counts do not describe one complete tree");
  }
  return OrderedTree(std::move(counts));
}

OrderedTree OrderedTree::from_labels(std::vector<Label> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.empty() || !labels.front().empty()) {
    throw std::invalid_argument("OrderedTree::from_labels: root label missing");
  }
  std::set<Label> present(labels.begin(), labels.end());
  std::map<Label, std::uint32_t> children;
  for (const auto& l : labels) {
    if (l.empty()) continue;
    Label parent(l.begin(), l.end() - 1);
    const auto j = l.back();
    if (j == 0) throw std::invalid_argument("OrderedTree::from_labels: child indices are 1-based");
    if (!present.count(parent)) throw std::invalid_argument("OrderedTree::from_labels: not prefix-closed");
    if (j > 1) {
      Label sibling = l;
      sibling.back() = j - 1;
      if (!present.count(sibling)) {
        throw std::invalid_argument("OrderedTree::from_labels: sibling indices not contiguous");
      }
    }
    ++children[parent];
  }
  std::vector<std::uint32_t> counts;
  counts.reserve(labels.size());
  for (const auto& l : labels) {
    auto it = children.find(l);
    counts.push_back(it == children.end() ? 0 : it->second);
  }
  return from_child_counts(std::move(counts));
}

OrderedTree OrderedTree::from_height(std::span<const std::int32_t> height) {
  if (height.empty() || height[0] != 0) {
    throw std::invalid_argument("OrderedTree::from_height: sequence must start at 0");
  }
  std::vector<std::uint32_t> counts(height.size(), 0);
  std::vector<std::size_t> last_at_level{0};
  for (std::size_t n = 1; n < height.size(); ++n) {
    const auto h = height[n];
    if (h < 1 || static_cast<std::size_t>(h) > last_at_level.size()) {
      throw std::invalid_argument("OrderedTree::from_height: invalid height step");
    }
    ++counts[last_at_level[static_cast<std::size_t>(h - 1)]];
    last_at_level.resize(static_cast<std::size_t>(h));
    last_at_level.push_back(n);
  }
  return OrderedTree(std::move(counts));
}

OrderedTree OrderedTree::parse(std::string_view text) {
  std::vector<std::uint32_t> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\n' || token.back() == '\r')) {
      token.remove_suffix(1);
    }
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw std::invalid_argument("OrderedTree::parse: bad child count '" + std::string(token) + "'");
    }
    counts.push_back(value);
    pos = comma + 1;
  }
  return from_child_counts(std::move(counts));
}

std::vector<std::size_t> OrderedTree::parents() const {
  std::vector<std::size_t> parent(counts_.size(), 0);
  std::vector<std::pair<std::size_t, std::uint32_t>> open;  // (vertex, children still to visit)
  if (counts_[0] > 0) open.emplace_back(0, counts_[0]);
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    auto& top = open.back();
    parent[n] = top.first;
    if (--top.second == 0) open.pop_back();
    if (counts_[n] > 0) open.emplace_back(n, counts_[n]);
  }
  return parent;
}

std::vector<std::uint32_t> OrderedTree::sibling_ranks() const {
  std::vector<std::uint32_t> rank(counts_.size(), 0);
  std::vector<std::pair<std::size_t, std::uint32_t>> open;
  if (counts_[0] > 0) open.emplace_back(0, counts_[0]);
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    auto& top = open.back();
    rank[n] = counts_[top.first] - top.second + 1;
    if (--top.second == 0) open.pop_back();
    if (counts_[n] > 0) open.emplace_back(n, counts_[n]);
  }
  return rank;
}

std::vector<Label> OrderedTree::labels() const {
  const auto parent = parents();
  const auto rank = sibling_ranks();
  std::vector<Label> out(counts_.size());
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    out[n] = out[parent[n]];
    out[n].push_back(rank[n]);
  }
  return out;
}

std::int32_t OrderedTree::max_height() const {
  const auto parent = parents();
  std::vector<std::int32_t> depth(counts_.size(), 0);
  std::int32_t best = 0;
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    depth[n] = depth[parent[n]] + 1;
    best = std::max(best, depth[n]);
  }
  return best;
}

std::vector<std::int64_t> OrderedTree::generation_sizes() const {
  const auto parent = parents();
  std::vector<std::int32_t> depth(counts_.size(), 0);
  std::vector<std::int64_t> sizes{1};
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    depth[n] = depth[parent[n]] + 1;
    if (static_cast<std::size_t>(depth[n]) >= sizes.size()) sizes.push_back(0);
    ++sizes[static_cast<std::size_t>(depth[n])];
  }
  return sizes;
}

std::size_t OrderedTree::leaf_count() const {
  return static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), 0u));
}

std::string OrderedTree::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(counts_[i]);
  }
  return out;
}

}  // namespace levytree
