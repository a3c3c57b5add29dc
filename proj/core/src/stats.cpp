#include "leafgrow/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace leafgrow {

namespace {

double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace

ChiSquare chi_square_gof(std::span<const std::int64_t> observed,
                         std::span<const double> expected_probs) {
  if (observed.size() != expected_probs.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: bin mismatch");
  std::int64_t total = 0;
  for (auto o : observed) total += o;
  ChiSquare out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(total);
    if (e <= 0.0)
      throw std::invalid_argument("chi_square_gof: zero expected count");
    const double d = static_cast<double>(observed[i]) - e;
    out.stat += d * d / e;
  }
  out.dof = static_cast<int>(observed.size()) - 1;
  out.p_value = chi_square_pvalue(out.stat, out.dof);
  return out;
}

ChiSquare chi_square_two_sample(std::span<const std::int64_t> o1,
                                std::span<const std::int64_t> o2) {
  if (o1.size() != o2.size() || o1.empty())
    throw std::invalid_argument("chi_square_two_sample: bin mismatch");
  double k1 = 0, k2 = 0;
  for (auto o : o1) k1 += static_cast<double>(o);
  for (auto o : o2) k2 += static_cast<double>(o);
  const double r1 = std::sqrt(k2 / k1), r2 = std::sqrt(k1 / k2);
  ChiSquare out;
  int used = 0;
  for (std::size_t i = 0; i < o1.size(); ++i) {
    const double a = static_cast<double>(o1[i]);
    const double b = static_cast<double>(o2[i]);
    if (a + b == 0.0) continue;
    const double d = r1 * a - r2 * b;
    out.stat += d * d / (a + b);
    ++used;
  }
  out.dof = used - 1;
  out.p_value = chi_square_pvalue(out.stat, out.dof);
  return out;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample_statistic: no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(double level, std::int64_t n) {
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical(double level, std::int64_t n1, std::int64_t n2) {
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  const double f1 = static_cast<double>(n1), f2 = static_cast<double>(n2);
  return c * std::sqrt((f1 + f2) / (f1 * f2));
}

Summary summarize(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("summarize: empty input");
  Summary s;
  s.count = static_cast<std::int64_t>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(s.count);
  if (s.count > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var /= static_cast<double>(s.count - 1);
    s.sd = std::sqrt(var);
    s.se = s.sd / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

double pearson_correlation(std::span<const double> xs,
                           std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("pearson_correlation: bad input");
  const auto sx = summarize(xs), sy = summarize(ys);
  double cov = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    cov += (xs[i] - sx.mean) * (ys[i] - sy.mean);
  cov /= static_cast<double>(xs.size() - 1);
  return cov / (sx.sd * sy.sd);
}

double interquartile_range(std::vector<double> xs) {
  if (xs.size() < 4)
    throw std::invalid_argument("interquartile_range: too few samples");
  std::sort(xs.begin(), xs.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= xs.size()) return xs.back();
    return xs[i] * (1.0 - frac) + xs[i + 1] * frac;
  };
  return quantile(0.75) - quantile(0.25);
}

Histogram make_histogram(std::span<const double> xs, int bins, double lo,
                         double hi) {
  if (bins < 1 || !(hi > lo))
    throw std::invalid_argument("make_histogram: bad range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (double x : xs) {
    if (x < lo) {
      ++h.underflow;
    } else if (x >= hi) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>((x - lo) * scale)];
    }
  }
  return h;
}

}  // namespace leafgrow
