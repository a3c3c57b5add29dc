#include "leafgrow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "leafgrow/combinatorics.hpp"

namespace leafgrow {

namespace {

double auto_exponent(double requested, double min_power) {
  if (requested > 0.0) return requested;
  // q * min_power >= 2 makes the substituted integrand C^1 at the endpoint.
  const double q = std::ceil(2.0 / std::min(min_power, 0.5));
  return std::clamp(q, 4.0, 12.0);
}

double log_beta_fn(double x, double y) {
  return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

Rational rational_pow(Rational q, int k) {
  Rational out(1);
  while (k > 0) {
    if (k & 1) out *= q;
    q *= q;
    k >>= 1;
  }
  return out;
}

}  // namespace

IntegralEstimate integral_I(double alpha, double beta,
                            const QuadratureConfig& cfg) {
  const double boundary = 2.0 * alpha + 1.5;
  if (!(beta < boundary))
    throw std::domain_error(
        "integral diverges: beta >= 2*alpha + 3/2 (alpha=" +
        std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  const double gap = boundary - beta;  // x-term behaves like x^{gap - 1}
  const double apow = alpha + 1.0;

  auto f = [apow, beta](double x, double) {
    // evaluated on (0, 1/2]; log1p keeps the 1-x side exact for tiny x
    const double lx = std::log(x);
    const double lomx = std::log1p(-x);
    const double c = x * x * (3.0 - 2.0 * x);
    const double lp = -1.5 * (lx + lomx);
    const double t1 = apow == 0.0 ? 0.0 : apow * std::log(c);
    const double pt1 = std::exp(lp + t1 - beta * lx);
    const double g = (apow == 0.0 ? 0.0 : apow * std::log1p(-c)) - beta * lomx;
    const double e2 = std::expm1(g);
    const double pt2 =
        e2 == 0.0 ? 0.0
                  : std::copysign(std::exp(lp + std::log(std::abs(e2))), e2);
    return pt1 + pt2;
  };

  const double q = auto_exponent(cfg.endpoint_exponent, gap);
  return integrate_symmetric_unit(f, q, cfg);
}

SpectrumResult beta_of_alpha(double alpha, const QuadratureConfig& cfg) {
  const double boundary = 2.0 * alpha + 1.5;
  SpectrumResult res;
  res.alpha = alpha;

  // Shrink toward the boundary until the integral turns positive.
  double delta = 0.1;
  double hi = boundary - delta;
  double f_hi = integral_I(alpha, hi, cfg).value;
  while (f_hi <= 0.0 && delta > 1e-9) {
    delta *= 0.25;
    hi = boundary - delta;
    f_hi = integral_I(alpha, hi, cfg).value;
  }
  if (f_hi <= 0.0)
    throw std::runtime_error(
        "beta_of_alpha: no sign change below the divergence boundary "
        "(alpha=" +
        std::to_string(alpha) + ", I(boundary-1e-9)=" + std::to_string(f_hi) +
        ")");

  const double floor_beta = -(60.0 + 8.0 * std::abs(alpha));
  double step = 1.0;
  double lo = hi - step;
  double f_lo = integral_I(alpha, lo, cfg).value;
  while (f_lo > 0.0) {
    step *= 2.0;
    lo -= step;
    if (lo < floor_beta)
      throw std::runtime_error(
          "beta_of_alpha: bracket expansion hit the lower bound " +
          std::to_string(floor_beta) + " without a sign change (alpha=" +
          std::to_string(alpha) + ")");
    f_lo = integral_I(alpha, lo, cfg).value;
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;

  int iters = 0;
  while (hi - lo > 1e-12 && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = integral_I(alpha, mid, cfg).value;
    ++iters;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  double beta = 0.5 * (lo + hi);
  if (f_hi > f_lo) {
    const double secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (secant > lo && secant < hi) beta = secant;
  }
  res.beta = beta;
  res.iterations = iters;
  res.residual = std::abs(integral_I(alpha, beta, cfg).value);
  return res;
}

double phi_closed_form(double alpha) {
  if (alpha < 0.0) throw std::domain_error("phi: alpha must be >= 0");
  if (alpha == 0.0) return 0.0;
  return 2.0 * std::sqrt(2.0) * alpha *
         std::exp(std::lgamma(1.5 + alpha) - std::lgamma(2.0 + alpha));
}

PhiResult phi(double alpha, const QuadratureConfig& cfg) {
  if (alpha < 0.0) throw std::domain_error("phi: alpha must be >= 0");
  auto f = [alpha](double x, double) {
    // evaluated on (0, 1/2]
    const double lomx = std::log1p(-x);
    const double c = x * x * (3.0 - 2.0 * x);
    const double A = -std::expm1(alpha * lomx);  // 1 - (1-x)^a
    const double B = c * (std::exp(alpha * lomx) -
                          (alpha == 0.0 ? 1.0 : std::pow(x, alpha)));
    return std::exp(-1.5 * (std::log(x) + lomx)) * (A + B);
  };
  const auto quad = integrate_symmetric_unit(f, 4.0, cfg);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(8.0 * std::atan(1.0));
  return PhiResult{{quad.value * inv_sqrt_2pi, quad.error * inv_sqrt_2pi},
                   phi_closed_form(alpha)};
}

GammaIntegrals gamma_integrals(const QuadratureConfig& cfg) {
  // c(x) p(x) with the complement supplied exactly
  auto cp = [](double x, double omx) {
    const double c = x * x * (3.0 - 2.0 * x);
    return c * std::pow(x * omx, -1.5);
  };
  auto num_f = [cp](double x, double omx) {
    const double lc = x <= 0.5
                          ? std::log(x * x * (3.0 - 2.0 * x))
                          : std::log1p(-omx * omx * (3.0 - 2.0 * omx));
    return -lc * cp(x, omx);
  };
  auto den_f = [cp](double x, double omx) {
    const double lx = x <= 0.5 ? std::log(x) : std::log1p(-omx);
    return -lx * cp(x, omx);
  };
  const auto num = integrate_unit(num_f, 2.0, 2.0, cfg);
  const auto den = integrate_unit(den_f, 2.0, 2.0, cfg);
  return GammaIntegrals{num.value, den.value, num.value / den.value};
}

double gamma_constant(const QuadratureConfig& cfg) {
  return gamma_integrals(cfg).ratio;
}

double pi_mu_mean(const QuadratureConfig& cfg) {
  const double pi_v = 4.0 * std::atan(1.0);
  return std::sqrt(2.0 / pi_v) * gamma_integrals(cfg).denominator;
}

double pi_nu_mean(const QuadratureConfig& cfg) {
  const double pi_v = 4.0 * std::atan(1.0);
  return std::sqrt(2.0 / pi_v) * gamma_integrals(cfg).numerator;
}

std::pair<IntegralEstimate, double> beta_identity(double alpha,
                                                  const QuadratureConfig& cfg) {
  if (!(alpha > 0.5))
    throw std::domain_error("beta_identity: requires alpha > 1/2");
  auto f = [alpha](double x, double) {
    // evaluated on (0, 1/2]
    const double lomx = std::log1p(-x);
    const double A = -std::expm1(alpha * lomx);  // 1 - (1-x)^a
    return (A - std::pow(x, alpha)) *
           std::exp(-1.5 * (std::log(x) + lomx));
  };
  const double q = auto_exponent(cfg.endpoint_exponent,
                                 std::min(alpha - 0.5, 0.5));
  const auto lhs = integrate_symmetric_unit(f, q, cfg);
  const double rhs =
      4.0 * alpha *
      (std::exp(log_beta_fn(alpha + 0.5, 0.5)) -
       std::exp(log_beta_fn(1.5, alpha - 0.5)));
  return {lhs, rhs};
}

MomentTable moment_recursion(double alpha, std::int64_t n_max,
                             std::int64_t cap) {
  if (n_max < 0) throw std::invalid_argument("moment_recursion: n_max < 0");
  if (n_max > cap)
    throw std::invalid_argument(
        "moment_recursion: n_max exceeds the cap (" + std::to_string(cap) +
        "); the recursion is O(N^2)");
  const double apow = alpha + 1.0;
  const LogWeightTable table(std::max<std::int64_t>(n_max, 1));
  MomentTable out;
  out.alpha = alpha;
  out.log_e.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  const double log2 = std::log(2.0);

  for (std::int64_t n = 1; n <= n_max; ++n) {
    // online log-sum-exp over a = 0..n-1
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::int64_t a = 0; a < n; ++a) {
      const std::int64_t b = n - 1 - a;
      const double num = static_cast<double>(a + 1) *
                         static_cast<double>(2 * a + 1) *
                         static_cast<double>(a + 3 * b + 3);
      const double den = static_cast<double>(n) *
                         static_cast<double>(n + 1) *
                         static_cast<double>(2 * n + 1);
      const double lc = std::log(num / den);
      const double t = table.log_split_prob(a, b) + apow * lc +
                       out.log_e[static_cast<std::size_t>(a)];
      if (t <= m) {
        s += std::exp(t - m);
      } else {
        s = s * std::exp(m - t) + 1.0;
        m = t;
      }
    }
    out.log_e[static_cast<std::size_t>(n)] = log2 + m + std::log(s);
  }
  return out;
}

std::vector<Rational> moment_recursion_exact(int alpha, int n_max) {
  if (alpha < -1)
    throw std::invalid_argument(
        "moment_recursion_exact: integer alpha must be >= -1");
  if (n_max < 0)
    throw std::invalid_argument("moment_recursion_exact: n_max < 0");
  const int apow = alpha + 1;
  std::vector<Rational> e(static_cast<std::size_t>(n_max + 1));
  e[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    Rational sum(0);
    for (int a = 0; a < n; ++a) {
      const int b = n - 1 - a;
      sum += split_prob(a, b) * rational_pow(c_weight(a, b), apow) *
             e[static_cast<std::size_t>(a)];
    }
    e[static_cast<std::size_t>(n)] = 2 * sum;
  }
  return e;
}

SlopeFit slope_fit(const MomentTable& table, std::int64_t window_lo,
                   std::int64_t window_hi) {
  const auto n_max = static_cast<std::int64_t>(table.log_e.size()) - 1;
  if (window_lo < 2 || window_hi <= window_lo || window_hi > n_max)
    throw std::invalid_argument("slope_fit: degenerate window");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(window_hi - window_lo + 1);
  for (std::int64_t n = window_lo; n <= window_hi; ++n) {
    const double x = std::log(static_cast<double>(n));
    const double y = -table.log_e[static_cast<std::size_t>(n)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit fit;
  fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / count;

  const double log2 = std::log(2.0);
  for (std::int64_t n = window_lo; 2 * n <= window_hi; n *= 2) {
    const double d = -(table.log_e[static_cast<std::size_t>(2 * n)] -
                       table.log_e[static_cast<std::size_t>(n)]) /
                     log2;
    fit.dyadic.emplace_back(n, d);
  }
  if (!fit.dyadic.empty()) {
    double s = 0;
    for (const auto& [n, d] : fit.dyadic) s += d;
    fit.dyadic_mean = s / static_cast<double>(fit.dyadic.size());
  }
  return fit;
}

}  // namespace leafgrow
