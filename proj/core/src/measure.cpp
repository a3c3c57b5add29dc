#include "leafgrow/measure.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "leafgrow/combinatorics.hpp"

namespace leafgrow {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::size_t LeafMeasure::index_of(NodeId leaf) const {
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i] == leaf) return i;
  throw std::out_of_range("LeafMeasure: node is not a leaf of this tree");
}

double LeafMeasure::total_mass() const {
  return std::exp(log_sum_exp(leaf_log_mass));
}

LeafMeasure::Extremes LeafMeasure::mass_extremes() const {
  if (leaves.empty()) throw std::logic_error("mass_extremes: empty measure");
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < leaf_log_mass.size(); ++i) {
    if (leaf_log_mass[i] < leaf_log_mass[imin]) imin = i;
    if (leaf_log_mass[i] > leaf_log_mass[imax]) imax = i;
  }
  return Extremes{leaf_log_mass[imin], leaf_log_mass[imax], leaves[imin],
                  leaves[imax]};
}

void LeafMeasure::write_csv(
    std::ostream& os,
    const std::vector<std::pair<std::string, std::string>>& metadata) const {
  for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
  os << "leaf_index,mass,log_mass,density_vs_uniform\n";
  const double log_uniform = -std::log(static_cast<double>(tree_size + 1));
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const double lm = leaf_log_mass[i];
    os << i << "," << format_g17(std::exp(lm)) << "," << format_g17(lm) << ","
       << format_g17(std::exp(lm - log_uniform)) << "\n";
  }
}

LeafMeasure compute_measure(const PlaneBinaryTree& tree,
                            std::int64_t exact_cap) {
  LeafMeasure m;
  m.tree_size = tree.size();
  m.leaves.reserve(static_cast<std::size_t>(tree.leaf_count()));
  m.leaf_log_mass.reserve(m.leaves.capacity());
  const bool exact = tree.size() <= exact_cap;
  if (exact) m.exact_mass.emplace();

  struct Frame {
    NodeId node;
    double log_acc;
    Rational acc;
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root(), 0.0, Rational(1)});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (tree.is_leaf(f.node)) {
      m.leaves.push_back(f.node);
      m.leaf_log_mass.push_back(f.log_acc);
      if (exact) m.exact_mass->push_back(f.acc);
      continue;
    }
    const NodeId l = tree.left(f.node), r = tree.right(f.node);
    const std::int64_t a = tree.subtree_size(l), b = tree.subtree_size(r);
    // preorder leaf order: push right first so left pops first
    if (exact) {
      stack.push_back({r, f.log_acc + c_weight_log(b, a),
                       f.acc * c_weight(b, a)});
      stack.push_back({l, f.log_acc + c_weight_log(a, b),
                       f.acc * c_weight(a, b)});
    } else {
      stack.push_back({r, f.log_acc + c_weight_log(b, a), Rational(0)});
      stack.push_back({l, f.log_acc + c_weight_log(a, b), Rational(0)});
    }
  }
  return m;
}

LeafMeasure uniform_measure(const PlaneBinaryTree& tree) {
  LeafMeasure m;
  m.tree_size = tree.size();
  m.leaves = tree.leaves_preorder();
  const double lm = -std::log(static_cast<double>(tree.leaf_count()));
  m.leaf_log_mass.assign(m.leaves.size(), lm);
  m.exact_mass.emplace(m.leaves.size(),
                       Rational(1, static_cast<std::int64_t>(tree.leaf_count())));
  return m;
}

NodeId sample_leaf_descent(const PlaneBinaryTree& tree, RngStream& rng,
                           double* neg_log_mass, int* depth) {
  NodeId v = tree.root();
  double nlm = 0.0;
  int d = 0;
  while (!tree.is_leaf(v)) {
    const NodeId l = tree.left(v), r = tree.right(v);
    const std::int64_t a = tree.subtree_size(l), b = tree.subtree_size(r);
    const double c = c_weight_f(a, b);
    if (rng.uniform() < c) {
      v = l;
      nlm -= std::log(c);
    } else {
      v = r;
      nlm -= std::log1p(-c);  // C(b,a) = 1 - C(a,b)
    }
    ++d;
  }
  if (neg_log_mass) *neg_log_mass = nlm;
  if (depth) *depth = d;
  return v;
}

NodeId sample_leaf_token_game(const PlaneBinaryTree& tree, RngStream& rng) {
  // winner[v] = surviving token label (a leaf id) of the subtree game at v.
  std::vector<NodeId> winner(static_cast<std::size_t>(tree.node_count()),
                             kNoNode);
  std::vector<std::int64_t> pile(static_cast<std::size_t>(tree.node_count()),
                                 0);
  std::vector<std::pair<NodeId, bool>> st{{tree.root(), false}};
  while (!st.empty()) {
    auto [v, expanded] = st.back();
    st.pop_back();
    if (tree.is_leaf(v)) {
      winner[v] = v;
      pile[v] = 1;
      continue;
    }
    if (!expanded) {
      st.push_back({v, true});
      st.push_back({tree.right(v), false});
      st.push_back({tree.left(v), false});
      continue;
    }
    const NodeId l = tree.left(v), r = tree.right(v);
    // Movable piles merge: each holds 2|t|+1 tokens.
    std::int64_t x = pile[l], y = pile[r];
    assert(x == 2 * tree.subtree_size(l) + 1);
    assert(y == 2 * tree.subtree_size(r) + 1);
    pile[v] = x + y + 1;  // three played matches add 3, relabel destroys 2
    int wins_left = 0;
    for (int match = 0; match < 3; ++match) {
      if (rng.uniform() * static_cast<double>(x + y) <
          static_cast<double>(x)) {
        ++wins_left;
        ++x;
      } else {
        ++y;
      }
    }
    winner[v] = wins_left >= 2 ? winner[l] : winner[r];
  }
  return winner[tree.root()];
}

std::string to_dot(const PlaneBinaryTree& tree, const LeafMeasure& measure) {
  std::ostringstream os;
  os << "digraph tree {\n";
  os << "  node [shape=point];\n";
  os << "  " << tree.root() << " [shape=circle, label=\"\", root=true];\n";
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < measure.leaves.size(); ++i) {
    os << "  " << measure.leaves[i] << " [mass=\""
       << format_g17(std::exp(measure.leaf_log_mass[i])) << "\"];\n";
  }
  for (NodeId v = 0; v < static_cast<NodeId>(nodes.size()); ++v) {
    if (nodes[v].left == kNoNode) continue;
    os << "  " << v << " -> " << nodes[v].left << ";\n";
    os << "  " << v << " -> " << nodes[v].right << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace leafgrow
