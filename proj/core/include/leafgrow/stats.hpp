#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace leafgrow {

struct ChiSquare {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed counts against expected probabilities.
ChiSquare chi_square_gof(std::span<const std::int64_t> observed,
                         std::span<const double> expected_probs);

// Homogeneity of two count vectors over the same bins.
ChiSquare chi_square_two_sample(std::span<const std::int64_t> o1,
                                std::span<const std::int64_t> o2);

// One-sample Kolmogorov-Smirnov statistic against a CDF (copies and sorts).
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic critical values: reject at `level` iff D exceeds these.
double ks_critical(double level, std::int64_t n);
double ks_two_sample_critical(double level, std::int64_t n1, std::int64_t n2);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::int64_t count = 0;
};
Summary summarize(std::span<const double> xs);

double pearson_correlation(std::span<const double> xs,
                           std::span<const double> ys);

double interquartile_range(std::vector<double> xs);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::int64_t> counts;
  std::int64_t underflow = 0;
  std::int64_t overflow = 0;
};
Histogram make_histogram(std::span<const double> xs, int bins, double lo,
                         double hi);

}  // namespace leafgrow
