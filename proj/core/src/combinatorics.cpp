#include "leafgrow/combinatorics.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace leafgrow {

namespace {

// Catalan memo, grown on demand. Readers copy values out under the lock;
// growth via Cat(n+1) = Cat(n) * 2(2n+1) / (n+2).
std::mutex g_catalan_mutex;
std::vector<BigInt>& catalan_table() {
  static std::vector<BigInt> table = {BigInt(1)};
  return table;
}

}  // namespace

BigInt catalan(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("catalan: n must be >= 0");
  std::lock_guard<std::mutex> lock(g_catalan_mutex);
  auto& table = catalan_table();
  while (static_cast<std::int64_t>(table.size()) <= n) {
    const std::int64_t k = static_cast<std::int64_t>(table.size()) - 1;
    table.push_back(table.back() * (2 * (2 * k + 1)) / (k + 2));
  }
  return table[static_cast<std::size_t>(n)];
}

Rational split_prob(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw std::invalid_argument("split_prob: negative size");
  return Rational(catalan(a) * catalan(b), catalan(a + b + 1));
}

Rational c_weight(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw std::invalid_argument("c_weight: negative size");
  const BigInt A = a, B = b;
  const BigInt num = (A + 1) * (2 * A + 1) * (A + 3 * B + 3);
  const BigInt den = (A + B + 1) * (A + B + 2) * (2 * (A + B) + 3);
  return Rational(num, den);
}

Rational best_of_three(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0)
    throw std::invalid_argument("best_of_three: negative size");
  const BigInt A = a, B = b;
  const BigInt num = 3 * (2 * A + 1) * (2 * A + 2) * (2 * B + 1) +
                     (2 * A + 1) * (2 * A + 2) * (2 * A + 3);
  const BigInt den =
      (2 * A + 2 * B + 2) * (2 * A + 2 * B + 3) * (2 * A + 2 * B + 4);
  return Rational(num, den);
}

double log_catalan(std::int64_t n) {
  const double x = static_cast<double>(n);
  return std::lgamma(2 * x + 1) - std::lgamma(x + 1) - std::lgamma(x + 2);
}

double split_prob_log(std::int64_t a, std::int64_t b) {
  return log_catalan(a) + log_catalan(b) - log_catalan(a + b + 1);
}

double split_prob_f(std::int64_t a, std::int64_t b) {
  return std::exp(split_prob_log(a, b));
}

double c_weight_f(std::int64_t a, std::int64_t b) {
  const double A = static_cast<double>(a), B = static_cast<double>(b);
  const double num = (A + 1) * (2 * A + 1) * (A + 3 * B + 3);
  const double den = (A + B + 1) * (A + B + 2) * (2 * (A + B) + 3);
  return num / den;
}

double c_weight_log(std::int64_t a, std::int64_t b) {
  return std::log(c_weight_f(a, b));
}

double c_limit(double x) {
  if (x < 0.0 || x > 1.0)
    throw std::domain_error("c_limit: x outside [0, 1]");
  return x * x * (3.0 - 2.0 * x);
}

double p_limit(double x) {
  if (x <= 0.0 || x >= 1.0)
    throw std::domain_error("p_limit: pole at the endpoints of (0, 1)");
  return std::pow(x * (1.0 - x), -1.5);
}

double approximation_error_scan(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("approximation_error_scan: n < 2");
  double worst = 0.0;
  for (std::int64_t a = 0; a < n; ++a) {
    const double err = std::abs(c_weight_f(a, n - 1 - a) -
                                c_limit(static_cast<double>(a) / n));
    if (err > worst) worst = err;
  }
  return worst;
}

LogWeightTable::LogWeightTable(std::int64_t n_max_in) : n_max(n_max_in) {
  if (n_max < 0) throw std::invalid_argument("LogWeightTable: n_max < 0");
  log_catalan.resize(static_cast<std::size_t>(2 * n_max + 1));
  for (std::int64_t k = 0; k <= 2 * n_max; ++k)
    log_catalan[static_cast<std::size_t>(k)] = leafgrow::log_catalan(k);
}

double LogWeightTable::log_split_prob(std::int64_t a, std::int64_t b) const {
  return log_catalan[static_cast<std::size_t>(a)] +
         log_catalan[static_cast<std::size_t>(b)] -
         log_catalan[static_cast<std::size_t>(a + b + 1)];
}

double weighted_profile_sum(std::int64_t n, int k,
                            const std::function<double(double)>& f) {
  if (n < 2) throw std::invalid_argument("weighted_profile_sum: n < 2");
  const LogWeightTable table(n);
  double sum = 0.0;
  for (std::int64_t a = 1; a < n; ++a) {
    const std::int64_t b = n - 1 - a;
    const double p = std::exp(table.log_split_prob(a, b));
    const double c = c_weight_f(a, b);
    sum += f(static_cast<double>(a) / n) * p * std::pow(c, k);
  }
  return std::sqrt(static_cast<double>(n)) * sum;
}

}  // namespace leafgrow
