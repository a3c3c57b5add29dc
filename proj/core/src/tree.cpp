#include "leafgrow/tree.hpp"

#include <sstream>

namespace leafgrow {

PlaneBinaryTree PlaneBinaryTree::decode(std::string_view word) {
  if (word.empty()) throw TreeParseError("empty input", 0);

  PlaneBinaryTree t;
  t.nodes_.clear();
  t.root_ = kNoNode;
  std::vector<NodeId> open;  // nodes whose ')' has not been seen

  for (std::size_t i = 0; i < word.size(); ++i) {
    const char ch = word[i];
    if (ch == '(') {
      const NodeId u = static_cast<NodeId>(t.nodes_.size());
      t.nodes_.emplace_back();
      if (open.empty()) {
        if (t.root_ != kNoNode)
          throw TreeParseError("trailing content after complete word", i);
        t.root_ = u;
      } else {
        Node& p = t.nodes_[open.back()];
        if (p.left == kNoNode) {
          p.left = u;
        } else if (p.right == kNoNode) {
          p.right = u;
        } else {
          throw TreeParseError("node with more than two children", i);
        }
        t.nodes_[u].parent = open.back();
      }
      open.push_back(u);
    } else if (ch == ')') {
      if (open.empty()) throw TreeParseError("unbalanced ')'", i);
      const Node& n = t.nodes_[open.back()];
      if (n.left != kNoNode && n.right == kNoNode)
        throw TreeParseError("node with exactly one child", i);
      open.pop_back();
    } else {
      throw TreeParseError(std::string("unexpected character '") + ch + "'",
                           i);
    }
  }
  if (!open.empty())
    throw TreeParseError("unbalanced '('", word.size());
  if (t.root_ == kNoNode) throw TreeParseError("empty input", 0);

  // Children are created after their parent, so a reverse scan is a valid
  // bottom-up order for the size computation.
  t.n_internal_ = 0;
  for (std::size_t i = t.nodes_.size(); i-- > 0;) {
    Node& n = t.nodes_[i];
    if (n.left == kNoNode) {
      n.subtree_size = 0;
    } else {
      n.subtree_size = 1 + t.nodes_[n.left].subtree_size +
                       t.nodes_[n.right].subtree_size;
      ++t.n_internal_;
    }
  }
  return t;
}

std::string PlaneBinaryTree::encode() const {
  std::string out;
  out.reserve(nodes_.size() * 2);
  // Explicit stack; kNoNode marks a pending ')'.
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (v == kNoNode) {
      out.push_back(')');
      continue;
    }
    out.push_back('(');
    stack.push_back(kNoNode);
    if (!is_leaf(v)) {
      stack.push_back(nodes_[v].right);
      stack.push_back(nodes_[v].left);
    }
  }
  return out;
}

int PlaneBinaryTree::depth(NodeId v) const {
  check(v);
  int d = 0;
  while (nodes_[v].parent != kNoNode) {
    v = nodes_[v].parent;
    ++d;
  }
  return d;
}

Profile PlaneBinaryTree::profile() const {
  if (n_internal_ < 1)
    throw std::invalid_argument("no profile for leaf-only tree");
  const Node& r = nodes_[root_];
  return Profile{nodes_[r.left].subtree_size, nodes_[r.right].subtree_size};
}

void PlaneBinaryTree::grow(NodeId leaf) {
  check(leaf);
  if (!is_leaf(leaf))
    throw std::invalid_argument("grow: node is not a leaf");
  const NodeId l = static_cast<NodeId>(nodes_.size());
  nodes_.emplace_back();
  const NodeId r = static_cast<NodeId>(nodes_.size());
  nodes_.emplace_back();
  nodes_[l].parent = leaf;
  nodes_[r].parent = leaf;
  Node& v = nodes_[leaf];
  v.left = l;
  v.right = r;
  v.subtree_size = 1;
  for (NodeId p = v.parent; p != kNoNode; p = nodes_[p].parent)
    ++nodes_[p].subtree_size;
  ++n_internal_;
}

std::vector<NodeId> PlaneBinaryTree::leaves_preorder() const {
  std::vector<NodeId> leaves;
  leaves.reserve(static_cast<std::size_t>(leaf_count()));
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (is_leaf(v)) {
      leaves.push_back(v);
    } else {
      stack.push_back(nodes_[v].right);
      stack.push_back(nodes_[v].left);
    }
  }
  return leaves;
}

void PlaneBinaryTree::validate() const {
  if (!contains(root_)) throw std::logic_error("validate: bad root");
  if (nodes_[root_].parent != kNoNode)
    throw std::logic_error("validate: root has a parent");

  std::int64_t internal = 0, seen = 0;
  std::vector<std::int64_t> computed(nodes_.size(), -1);
  // Two-phase stack postorder; the bool marks the second visit.
  std::vector<std::pair<NodeId, bool>> st{{root_, false}};
  while (!st.empty()) {
    auto [v, expanded] = st.back();
    st.pop_back();
    if (!contains(v)) throw std::logic_error("validate: dangling child id");
    const Node& n = nodes_[v];
    if ((n.left == kNoNode) != (n.right == kNoNode))
      throw std::logic_error("validate: node with exactly one child");
    if (!expanded) {
      ++seen;
      if (seen > static_cast<std::int64_t>(nodes_.size()))
        throw std::logic_error("validate: cycle detected");
      st.push_back({v, true});
      if (n.left != kNoNode) {
        if (nodes_[n.left].parent != v || nodes_[n.right].parent != v)
          throw std::logic_error("validate: parent/child mismatch");
        st.push_back({n.left, false});
        st.push_back({n.right, false});
      }
    } else {
      if (n.left == kNoNode) {
        computed[v] = 0;
      } else {
        computed[v] = 1 + computed[n.left] + computed[n.right];
        ++internal;
      }
      if (computed[v] != n.subtree_size)
        throw std::logic_error("validate: stale subtree_size");
    }
  }
  if (seen != static_cast<std::int64_t>(nodes_.size()))
    throw std::logic_error("validate: unreachable nodes in store");
  if (internal != n_internal_)
    throw std::logic_error("validate: wrong internal count");
  if (nodes_[root_].subtree_size != n_internal_)
    throw std::logic_error("validate: root size != internal count");
}

namespace {

void enumerate_words(int n, std::vector<std::vector<std::string>>& memo) {
  if (static_cast<int>(memo.size()) > n) return;
  for (int k = static_cast<int>(memo.size()); k <= n; ++k) {
    std::vector<std::string> words;
    for (int a = 0; a < k; ++a) {
      for (const auto& wl : memo[static_cast<std::size_t>(a)]) {
        for (const auto& wr : memo[static_cast<std::size_t>(k - 1 - a)]) {
          words.push_back("(" + wl + wr + ")");
        }
      }
    }
    memo.push_back(std::move(words));
  }
}

}  // namespace

std::vector<PlaneBinaryTree> enumerate_all(int n, int cap) {
  if (n < 0) throw std::invalid_argument("enumerate_all: n < 0");
  if (n > cap)
    throw std::invalid_argument(
        "enumerate_all: n exceeds the brute-force cap (" +
        std::to_string(cap) + ")");
  std::vector<std::vector<std::string>> memo;
  memo.push_back({"()"});
  enumerate_words(n, memo);
  std::vector<PlaneBinaryTree> out;
  out.reserve(memo[static_cast<std::size_t>(n)].size());
  for (const auto& w : memo[static_cast<std::size_t>(n)])
    out.push_back(PlaneBinaryTree::decode(w));
  return out;
}

PlaneBinaryTree remy_sample(std::int64_t n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("remy_sample: n < 0");
  PlaneBinaryTree t;
  if (n == 0) return t;

  // Work on a raw node array; sizes are recomputed once at the end.
  std::vector<PlaneBinaryTree::Node> nodes(1);
  NodeId root = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    const NodeId v =
        static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(nodes.size())));
    const bool new_leaf_on_left = rng.coin();
    const NodeId u = static_cast<NodeId>(nodes.size());
    nodes.emplace_back();
    const NodeId w = static_cast<NodeId>(nodes.size());
    nodes.emplace_back();

    nodes[u].parent = nodes[v].parent;
    if (nodes[v].parent == kNoNode) {
      root = u;
    } else {
      PlaneBinaryTree::Node& p = nodes[nodes[u].parent];
      (p.left == v ? p.left : p.right) = u;
    }
    nodes[u].left = new_leaf_on_left ? w : v;
    nodes[u].right = new_leaf_on_left ? v : w;
    nodes[v].parent = u;
    nodes[w].parent = u;
  }

  // Rebuild through the canonical encoding path to restore the invariant
  // that sizes are cached; cost O(n).
  std::string word;
  word.reserve(nodes.size() * 2);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (v == kNoNode) {
      word.push_back(')');
      continue;
    }
    word.push_back('(');
    stack.push_back(kNoNode);
    if (nodes[v].left != kNoNode) {
      stack.push_back(nodes[v].right);
      stack.push_back(nodes[v].left);
    }
  }
  return PlaneBinaryTree::decode(word);
}

std::string to_dot(const PlaneBinaryTree& tree) {
  std::ostringstream os;
  os << "digraph tree {\n";
  os << "  node [shape=point];\n";
  os << "  " << tree.root() << " [shape=circle, label=\"\", root=true];\n";
  const auto& nodes = tree.nodes();
  for (NodeId v = 0; v < static_cast<NodeId>(nodes.size()); ++v) {
    if (nodes[v].left == kNoNode) continue;
    os << "  " << v << " -> " << nodes[v].left << ";\n";
    os << "  " << v << " -> " << nodes[v].right << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace leafgrow
