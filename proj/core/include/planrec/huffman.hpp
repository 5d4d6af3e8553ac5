#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "planrec/corpus.hpp"

namespace planrec {

// Binary output tree for hierarchical softmax. Leaves are actions; each inner
// node owns one output vector. For every action the tree stores the inner
// nodes on its root-to-leaf path and, per step, +1 when the path continues
// into the node's designated child and -1 otherwise.
class HuffmanTree {
 public:
  using NodeId = std::uint32_t;
  using Sign = std::int8_t;

  HuffmanTree() = default;

  // Validates and adopts externally stored paths (e.g. from a model file).
  static HuffmanTree from_paths(std::vector<std::vector<NodeId>> paths,
                                std::vector<std::vector<Sign>> codes);

  std::size_t leaf_count() const noexcept { return paths_.size(); }
  std::size_t inner_count() const noexcept { return leaf_count() == 0 ? 0 : leaf_count() - 1; }

  std::span<const NodeId> path(ActionId leaf) const { return paths_.at(leaf); }
  std::span<const Sign> code(ActionId leaf) const { return codes_.at(leaf); }

  const std::vector<std::vector<NodeId>>& paths() const noexcept { return paths_; }
  const std::vector<std::vector<Sign>>& codes() const noexcept { return codes_; }

  bool operator==(const HuffmanTree&) const = default;

 private:
  friend HuffmanTree build_huffman(std::span<const std::uint64_t>, std::span<const std::string>);

  std::vector<std::vector<NodeId>> paths_;
  std::vector<std::vector<Sign>> codes_;
};

// Frequency Huffman tree. Ties are broken by (count, token text) for leaves;
// on equal weight a leaf is merged before an inner node. The lighter child of
// each merge is the designated child.
HuffmanTree build_huffman(std::span<const std::uint64_t> counts,
                          std::span<const std::string> tokens);
HuffmanTree build_huffman(const Vocabulary& vocabulary);

}  // namespace planrec
