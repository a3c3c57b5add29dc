#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafgrow/rational.hpp"
#include "leafgrow/rng.hpp"
#include "leafgrow/tree.hpp"

namespace leafgrow {

inline constexpr std::int64_t kExactMeasureCap = 30;

// Per-leaf masses of a measure on the leaves of one tree, in preorder leaf
// order. Masses live in the log domain (typical masses decay polynomially in
// the size, and products along deep paths underflow raw doubles); an exact
// rational copy is populated for small trees where it feeds oracles.
struct LeafMeasure {
  std::int64_t tree_size = 0;
  std::vector<NodeId> leaves;         // preorder order
  std::vector<double> leaf_log_mass;  // aligned with leaves
  std::optional<std::vector<Rational>> exact_mass;

  std::size_t index_of(NodeId leaf) const;  // throws if not a leaf here
  double log_mass_of(NodeId leaf) const {
    return leaf_log_mass[index_of(leaf)];
  }
  // sum of exp(log mass) via log-sum-exp
  double total_mass() const;

  struct Extremes {
    double min_log_mass;
    double max_log_mass;
    NodeId argmin;
    NodeId argmax;
  };
  Extremes mass_extremes() const;

  // Columns: leaf_index, mass, log_mass, density_vs_uniform. Metadata rows
  // are emitted first as "# key=value" comment lines.
  void write_csv(
      std::ostream& os,
      const std::vector<std::pair<std::string, std::string>>& metadata = {})
      const;
};

// The leaf-growth measure: mass of leaf l is the product of C(a_i, b_i) over
// the ancestral path, where a_i is the internal size of the subtree at the
// height-i ancestor and b_i the size of its sibling's subtree. Exact masses
// are filled when size <= exact_cap.
LeafMeasure compute_measure(const PlaneBinaryTree& tree,
                            std::int64_t exact_cap = kExactMeasureCap);

// Every leaf gets 1/(n+1).
LeafMeasure uniform_measure(const PlaneBinaryTree& tree);

// One root-to-leaf descent through the size-weighted C(a,b) choices; the leaf
// law is the leaf-growth measure, cost O(height). Outputs, when non-null:
// the accumulated -log mass and the leaf depth.
NodeId sample_leaf_descent(const PlaneBinaryTree& tree, RngStream& rng,
                           double* neg_log_mass = nullptr,
                           int* depth = nullptr);

// Bottom-up token game (postorder): each internal vertex merges the movable
// piles of its children (sizes 2|t^v|+1) and plays the best-of-three match of
// the combinatorial interpretation of C(a,b). Same leaf law as the descent.
NodeId sample_leaf_token_game(const PlaneBinaryTree& tree, RngStream& rng);

// DOT export; leaves carry a "mass" attribute when a measure is supplied.
std::string to_dot(const PlaneBinaryTree& tree, const LeafMeasure& measure);

}  // namespace leafgrow
