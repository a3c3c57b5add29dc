#pragma once

#include <cstdint>
#include <vector>

#include "leafgrow/measure.hpp"
#include "leafgrow/rational.hpp"
#include "leafgrow/rng.hpp"
#include "leafgrow/tree.hpp"

namespace leafgrow {

inline constexpr std::int64_t kChainCap = 1000000;
inline constexpr int kPushforwardCap = 7;
inline constexpr std::int64_t kConcentrationCap = 100000;

// One checkpoint of a growth run. log_mass is -log of the mass that the
// leaf-growth measure of the current tree gave to the step's grown leaf
// (that leaf is by construction a sample of the measure, so the value is
// exactly the -log M_n trajectory statistic).
struct TrajectoryRecord {
  std::int64_t n = 0;
  double log_mass = 0.0;
  std::int32_t leaf_height = 0;
  double stat = 0.0;  // total internal path length, when recorded
  bool has_stat = false;
};

// Live growth chain. Starting from the size-0 tree, each step samples a leaf
// by descent and grows a cherry there; the tree stays uniform at every size.
class GrowthState {
 public:
  explicit GrowthState(RngStream rng) : rng_(rng) {}

  const PlaneBinaryTree& tree() const { return tree_; }
  std::int64_t size() const { return tree_.size(); }

  struct StepInfo {
    std::int64_t n;  // size the descent was performed on
    double log_mass;
    std::int32_t leaf_height;
    NodeId leaf;
  };

  StepInfo step();         // descend, record, grow
  StepInfo sample_only();  // descend and record without growing

 private:
  PlaneBinaryTree tree_;
  RngStream rng_;
};

// Grows one chain to n_target, recording a TrajectoryRecord at each listed
// checkpoint size (checkpoints beyond n_target are ignored). with_stat adds
// the O(n) path-length statistic at checkpoints.
std::vector<TrajectoryRecord> run_chain(std::int64_t n_target,
                                        std::vector<std::int64_t> checkpoints,
                                        RngStream rng, bool with_stat = false,
                                        std::int64_t cap = kChainCap);

// Sum of the depths of the internal vertices.
std::int64_t total_internal_path_length(const PlaneBinaryTree& tree);

// Exact check of the defining pushforward property: pushing
// (uniform on size-n trees) x (leaf-growth measure) through grow must give
// the uniform law on size-(n+1) trees. Returns the maximum absolute
// deviation from 1/Cat(n+1) over all targets, in exact rationals (zero iff
// the property holds). n <= kPushforwardCap.
Rational uniformity_pushforward_deviation(int n);

// Monte-Carlo estimate of the measure carried by leaves with mass inside
// [n^{-g-eps}, n^{-g+eps}], g = 3(2-sqrt(3)), averaged over uniform trees.
double mass_concentration_profile(std::int64_t n, int replicas, double eps,
                                  std::uint64_t seed, unsigned threads = 1,
                                  std::int64_t cap = kConcentrationCap);

struct MixingResult {
  double correlation = 0.0;
  double std_error = 0.0;
  int replicas = 0;
};

// Correlation of the standardized path-length statistic between the size-m
// and size-n states of the same chain, over independent replicas.
MixingResult mixing_correlation(std::int64_t m, std::int64_t n, int replicas,
                                std::uint64_t seed, unsigned threads = 1);

}  // namespace leafgrow
