#include "planrec/huffman.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "planrec/error.hpp"

namespace planrec {

HuffmanTree build_huffman(std::span<const std::uint64_t> counts,
                          std::span<const std::string> tokens) {
  const std::size_t v = counts.size();
  if (tokens.size() != v) fail(ErrorCode::kShapeMismatch, "counts and tokens differ in length");
  if (v < 2) {
    fail(ErrorCode::kDegenerateVocabulary,
         "hierarchical softmax needs at least 2 actions, got " + std::to_string(v));
  }

  std::vector<std::uint32_t> leaves(v);
  std::iota(leaves.begin(), leaves.end(), 0);
  std::sort(leaves.begin(), leaves.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (counts[a] != counts[b]) return counts[a] < counts[b];
    return tokens[a] < tokens[b];
  });

  // Node ids: leaves 0..v-1 (action ids), inner nodes v..2v-2 in creation
  // order. Inner weights are non-decreasing, so two FIFO queues suffice.
  const std::size_t total = 2 * v - 1;
  std::vector<std::uint64_t> weight(total, 0);
  std::vector<std::uint32_t> parent(total, 0);
  std::vector<HuffmanTree::Sign> sign(total, 0);
  for (std::size_t i = 0; i < v; ++i) weight[i] = counts[i];

  std::size_t next_leaf = 0;
  std::size_t next_inner = v;
  std::size_t created = v;
  auto pop_min = [&]() -> std::uint32_t {
    const bool leaf_left = next_leaf < v;
    const bool inner_left = next_inner < created;
    if (leaf_left && (!inner_left || weight[leaves[next_leaf]] <= weight[next_inner])) {
      return leaves[next_leaf++];
    }
    return static_cast<std::uint32_t>(next_inner++);
  };
  while (created < total) {
    const std::uint32_t first = pop_min();
    const std::uint32_t second = pop_min();
    weight[created] = weight[first] + weight[second];
    parent[first] = parent[second] = static_cast<std::uint32_t>(created);
    sign[first] = +1;
    sign[second] = -1;
    ++created;
  }

  const std::uint32_t root = static_cast<std::uint32_t>(total - 1);
  HuffmanTree tree;
  tree.paths_.resize(v);
  tree.codes_.resize(v);
  for (std::uint32_t leaf = 0; leaf < v; ++leaf) {
    auto& path = tree.paths_[leaf];
    auto& code = tree.codes_[leaf];
    for (std::uint32_t node = leaf; node != root; node = parent[node]) {
      path.push_back(static_cast<HuffmanTree::NodeId>(parent[node] - v));
      code.push_back(sign[node]);
    }
    std::reverse(path.begin(), path.end());
    std::reverse(code.begin(), code.end());
  }
  return tree;
}

HuffmanTree build_huffman(const Vocabulary& vocabulary) {
  return build_huffman(vocabulary.counts(), vocabulary.tokens());
}

HuffmanTree HuffmanTree::from_paths(std::vector<std::vector<NodeId>> paths,
                                    std::vector<std::vector<Sign>> codes) {
  const std::size_t v = paths.size();
  if (v < 2) fail(ErrorCode::kDegenerateVocabulary, "tree needs at least 2 leaves");
  if (codes.size() != v) fail(ErrorCode::kShapeMismatch, "paths and codes differ in length");
  const std::size_t inner = v - 1;

  // (inner node, direction) -> child, where child >= 0 is an inner node and
  // child < 0 encodes leaf -(leaf + 1). A full binary tree fills every slot
  // exactly once.
  std::map<std::pair<NodeId, Sign>, long long> child;
  auto link = [&](NodeId node, Sign dir, long long target) {
    auto [it, inserted] = child.emplace(std::pair{node, dir}, target);
    if (!inserted && it->second != target) fail(ErrorCode::kFormat, "inconsistent tree paths");
  };
  std::vector<bool> seen(inner, false);
  std::optional<NodeId> root;
  for (std::size_t leaf = 0; leaf < v; ++leaf) {
    const auto& path = paths[leaf];
    const auto& code = codes[leaf];
    if (path.empty() || path.size() != code.size()) {
      fail(ErrorCode::kFormat, "leaf " + std::to_string(leaf) + " has a malformed path");
    }
    if (!root) root = path.front();
    if (path.front() != *root) fail(ErrorCode::kFormat, "paths do not share a root");
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path[i] >= inner) fail(ErrorCode::kFormat, "inner node id out of range");
      if (code[i] != 1 && code[i] != -1) fail(ErrorCode::kFormat, "code entries must be +1 or -1");
      seen[path[i]] = true;
      const long long target = i + 1 < path.size() ? static_cast<long long>(path[i + 1])
                                                   : -static_cast<long long>(leaf) - 1;
      link(path[i], code[i], target);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end() || child.size() != 2 * inner) {
    fail(ErrorCode::kFormat, "paths do not describe a full binary tree");
  }
  HuffmanTree tree;
  tree.paths_ = std::move(paths);
  tree.codes_ = std::move(codes);
  return tree;
}

}  // namespace planrec
