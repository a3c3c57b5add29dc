#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "leafgrow/rational.hpp"

namespace leafgrow {

// ---------------------------------------------------------------------------
// Exact (arbitrary-precision) quantities.
//
//   catalan(n)        Cat(n) = binom(2n, n) / (n + 1)
//   split_prob(a, b)  P(a,b) = Cat(a) Cat(b) / Cat(a+b+1), the probability
//                     that a uniform tree of size a+b+1 has profile (a,b)
//   c_weight(a, b)    C(a,b) = (a+1)(2a+1)(a+3b+3) /
//                              ((a+b+1)(a+b+2)(2(a+b)+3)),
//                     the weight of descending into the size-a side of an
//                     (a,b) split; satisfies C(a,b) + C(b,a) = 1
//   best_of_three     the two-term match-winning probability that equals
//                     C(a,b) (a player with 2a+1 tokens beating 2b+1 in a
//                     majority of three token-weighted matches)
// ---------------------------------------------------------------------------

BigInt catalan(std::int64_t n);
Rational split_prob(std::int64_t a, std::int64_t b);
Rational c_weight(std::int64_t a, std::int64_t b);
Rational best_of_three(std::int64_t a, std::int64_t b);

// ---------------------------------------------------------------------------
// Floating / log-domain counterparts, usable at sizes where the exact path
// would be wasteful. log_catalan goes through lgamma.
// ---------------------------------------------------------------------------

double log_catalan(std::int64_t n);
double split_prob_log(std::int64_t a, std::int64_t b);
double split_prob_f(std::int64_t a, std::int64_t b);
double c_weight_f(std::int64_t a, std::int64_t b);
double c_weight_log(std::int64_t a, std::int64_t b);

// Continuum limits: c(x) = x^2 (3 - 2x) on [0,1] and p(x) = (x(1-x))^{-3/2}
// on (0,1). p_limit throws std::domain_error at the poles.
double c_limit(double x);
double p_limit(double x);

// max over a of |C(a, n-1-a) - c(a/n)|; bounded by 1/n.
double approximation_error_scan(std::int64_t n);

// Precomputed log Cat(k) for k <= 2 * n_max, for O(1) log P(a,b) lookups.
struct LogWeightTable {
  std::int64_t n_max = 0;
  std::vector<double> log_catalan;

  explicit LogWeightTable(std::int64_t n_max);
  double log_split_prob(std::int64_t a, std::int64_t b) const;
};

// sqrt(n) * sum_{a=1}^{n-1} f(a/n) P(a, n-1-a) C(a, n-1-a)^k.
// For admissible f this converges to (1/(4 sqrt(pi))) \int f c^k p dx.
double weighted_profile_sum(std::int64_t n, int k,
                            const std::function<double(double)>& f);

}  // namespace leafgrow
