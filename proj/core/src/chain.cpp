#include "leafgrow/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "leafgrow/combinatorics.hpp"
#include "leafgrow/parallel.hpp"

namespace leafgrow {

GrowthState::StepInfo GrowthState::step() {
  StepInfo info = sample_only();
  tree_.grow(info.leaf);
  return info;
}

GrowthState::StepInfo GrowthState::sample_only() {
  StepInfo info;
  info.n = tree_.size();
  int depth = 0;
  info.leaf = sample_leaf_descent(tree_, rng_, &info.log_mass, &depth);
  info.leaf_height = depth;
  return info;
}

std::vector<TrajectoryRecord> run_chain(std::int64_t n_target,
                                        std::vector<std::int64_t> checkpoints,
                                        RngStream rng, bool with_stat,
                                        std::int64_t cap) {
  if (n_target < 0 || n_target > cap)
    throw std::invalid_argument("run_chain: n_target outside [0, " +
                                std::to_string(cap) + "]");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());

  GrowthState state{rng};
  std::vector<TrajectoryRecord> records;
  std::size_t next_cp = 0;
  while (next_cp < checkpoints.size() && checkpoints[next_cp] < 0) ++next_cp;

  for (;;) {
    const std::int64_t n = state.size();
    const bool at_checkpoint =
        next_cp < checkpoints.size() && checkpoints[next_cp] == n;
    if (at_checkpoint) {
      const bool last = n >= n_target;
      const auto info = last ? state.sample_only() : state.step();
      TrajectoryRecord rec;
      rec.n = n;
      rec.log_mass = info.log_mass;
      rec.leaf_height = info.leaf_height;
      if (with_stat) {
        rec.stat =
            static_cast<double>(total_internal_path_length(state.tree()));
        rec.has_stat = true;
      }
      records.push_back(rec);
      ++next_cp;
      if (last) break;
      continue;
    }
    if (n >= n_target) break;
    state.step();
  }
  return records;
}

std::int64_t total_internal_path_length(const PlaneBinaryTree& tree) {
  std::int64_t total = 0;
  std::vector<std::pair<NodeId, std::int32_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    const auto [v, d] = stack.back();
    stack.pop_back();
    if (tree.is_leaf(v)) continue;
    total += d;
    stack.push_back({tree.left(v), d + 1});
    stack.push_back({tree.right(v), d + 1});
  }
  return total;
}

Rational uniformity_pushforward_deviation(int n) {
  if (n < 0 || n > kPushforwardCap)
    throw std::invalid_argument(
        "uniformity_pushforward_deviation: n outside [0, " +
        std::to_string(kPushforwardCap) + "]");

  const auto trees = enumerate_all(n);
  const Rational inv_count(BigInt(1), catalan(n));
  std::map<std::string, Rational> pushed;
  for (const auto& t : trees) {
    const LeafMeasure m = compute_measure(t, n);
    for (std::size_t i = 0; i < m.leaves.size(); ++i) {
      PlaneBinaryTree grown = t;
      grown.grow(m.leaves[i]);
      pushed[grown.encode()] += inv_count * (*m.exact_mass)[i];
    }
  }

  const Rational target(BigInt(1), catalan(n + 1));
  if (pushed.size() != catalan(n + 1).convert_to<std::size_t>())
    throw std::logic_error(
        "uniformity_pushforward_deviation: some targets were never hit");
  Rational worst(0);
  for (const auto& [word, mass] : pushed) {
    const Rational dev = mass >= target ? mass - target : target - mass;
    if (dev > worst) worst = dev;
  }
  return worst;
}

double mass_concentration_profile(std::int64_t n, int replicas, double eps,
                                  std::uint64_t seed, unsigned threads,
                                  std::int64_t cap) {
  if (n < 1 || n > cap)
    throw std::invalid_argument(
        "mass_concentration_profile: n outside [1, " + std::to_string(cap) +
        "] (needs the full leaf-mass vector)");
  if (replicas < 1)
    throw std::invalid_argument("mass_concentration_profile: no replicas");

  const double g = 3.0 * (2.0 - std::sqrt(3.0));
  const double logn = std::log(static_cast<double>(n));
  const double lo = -(g + eps) * logn;
  const double hi = -(g - eps) * logn;

  std::vector<double> fractions(static_cast<std::size_t>(replicas), 0.0);
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    RngStream rng(seed, r, /*purpose=*/0x6d617373);  // "mass"
    const PlaneBinaryTree t = remy_sample(n, rng);
    const LeafMeasure m = compute_measure(t, /*exact_cap=*/0);
    // log-sum-exp of the masses inside the window
    double mx = -std::numeric_limits<double>::infinity();
    for (double lm : m.leaf_log_mass)
      if (lm >= lo && lm <= hi) mx = std::max(mx, lm);
    double s = 0.0;
    if (std::isfinite(mx)) {
      for (double lm : m.leaf_log_mass)
        if (lm >= lo && lm <= hi) s += std::exp(lm - mx);
      fractions[r] = std::exp(mx) * s;
    }
  });

  double mean = 0.0;
  for (double f : fractions) mean += f;
  return mean / static_cast<double>(replicas);
}

MixingResult mixing_correlation(std::int64_t m, std::int64_t n, int replicas,
                                std::uint64_t seed, unsigned threads) {
  if (m > n) throw std::invalid_argument("mixing_correlation: requires m <= n");
  if (replicas < 4)
    throw std::invalid_argument("mixing_correlation: too few replicas");
  if (m == n) return MixingResult{1.0, 0.0, replicas};

  std::vector<double> at_m(static_cast<std::size_t>(replicas));
  std::vector<double> at_n(static_cast<std::size_t>(replicas));
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    RngStream rng(seed, r, /*purpose=*/0x6d6978);  // "mix"
    const auto records = run_chain(n, {m, n}, rng, /*with_stat=*/true);
    at_m[r] = records.at(0).stat;
    at_n[r] = records.at(1).stat;
  });

  const auto standardize = [](std::vector<double>& v) {
    double mean = 0, var = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    const double sd = std::sqrt(var);
    for (double& x : v) x = (x - mean) / sd;
  };
  standardize(at_m);
  standardize(at_n);

  double corr = 0.0;
  for (std::size_t i = 0; i < at_m.size(); ++i) corr += at_m[i] * at_n[i];
  corr /= static_cast<double>(replicas - 1);

  MixingResult res;
  res.correlation = corr;
  res.std_error =
      (1.0 - corr * corr) / std::sqrt(static_cast<double>(replicas - 1));
  res.replicas = replicas;
  return res;
}

}  // namespace leafgrow
