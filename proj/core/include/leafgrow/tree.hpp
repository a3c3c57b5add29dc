#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leafgrow/rng.hpp"

namespace leafgrow {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Root split (left internal size, right internal size); left + right = n - 1.
struct Profile {
  std::int64_t left = 0;
  std::int64_t right = 0;
  friend bool operator==(const Profile&, const Profile&) = default;
};

struct TreeParseError : std::runtime_error {
  TreeParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

// Rooted plane binary tree: every vertex has exactly 2 or 0 children.
// Size = number of internal vertices; a size-n tree has n+1 leaves.
// Index-based node store with parent links and cached internal subtree
// sizes, so grow() is O(height) including the size updates along the path.
class PlaneBinaryTree {
 public:
  struct Node {
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    NodeId parent = kNoNode;
    std::int32_t subtree_size = 0;  // internal vertices below incl. self
  };

  // The size-0 tree: a single leaf.
  PlaneBinaryTree() : nodes_(1), root_(0), n_internal_(0) {}

  // Balanced-parenthesis word: leaf = "()", internal = "(" + L + R + ")".
  static PlaneBinaryTree decode(std::string_view word);
  std::string encode() const;

  std::int64_t size() const { return n_internal_; }
  std::int64_t leaf_count() const { return n_internal_ + 1; }
  std::int64_t node_count() const {
    return static_cast<std::int64_t>(nodes_.size());
  }
  NodeId root() const { return root_; }
  bool contains(NodeId v) const {
    return v >= 0 && v < static_cast<NodeId>(nodes_.size());
  }
  bool is_leaf(NodeId v) const { return nodes_[check(v)].left == kNoNode; }
  NodeId left(NodeId v) const { return nodes_[check(v)].left; }
  NodeId right(NodeId v) const { return nodes_[check(v)].right; }
  NodeId parent(NodeId v) const { return nodes_[check(v)].parent; }
  std::int64_t subtree_size(NodeId v) const {
    return nodes_[check(v)].subtree_size;
  }
  int depth(NodeId v) const;

  Profile profile() const;

  // Attaches a cherry (two sibling leaves) at `leaf`, turning it internal.
  // Subtree sizes are updated along the root-to-leaf path only.
  void grow(NodeId leaf);

  std::vector<NodeId> leaves_preorder() const;

  // Full structural check: child/parent consistency, 0-or-2 children,
  // acyclicity, cached sizes. Throws std::logic_error on violation.
  void validate() const;

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  NodeId check(NodeId v) const {
    if (!contains(v)) throw std::out_of_range("PlaneBinaryTree: bad node id");
    return v;
  }
  std::vector<Node> nodes_;
  NodeId root_;
  std::int64_t n_internal_;
};

inline constexpr int kEnumerationCap = 12;  // Cat(12) = 208012

// All Cat(n) trees of size n, in a fixed deterministic order.
std::vector<PlaneBinaryTree> enumerate_all(int n, int cap = kEnumerationCap);

// Uniform sample from the size-n trees (edge-insertion growth; each step
// picks one of the 2k+1 vertices and a side, which multiplies histories
// evenly across shapes).
PlaneBinaryTree remy_sample(std::int64_t n, RngStream& rng);

std::string to_dot(const PlaneBinaryTree& tree);

}  // namespace leafgrow
