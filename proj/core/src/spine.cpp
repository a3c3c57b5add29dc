#include "leafgrow/spine.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "leafgrow/combinatorics.hpp"

namespace leafgrow {

namespace {

const double kPi = 4.0 * std::atan(1.0);
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

// W(x) = \int_0^x c(t) p(t) dt = 2 x^{3/2} / sqrt(1-x)
double W_antiderivative(double x) {
  return 2.0 * std::pow(x, 1.5) / std::sqrt(1.0 - x);
}

// solve W(x) = y, i.e. 4x^3 + y^2 x - y^2 = 0, unique root in (0,1).
// g is increasing and convex on x >= 0, so Newton from the right converges
// monotonically.
double W_inverse(double y, double x_hi) {
  if (y <= 0.0) return 0.0;
  const double y2 = y * y;
  double x = x_hi;
  for (int it = 0; it < 80; ++it) {
    const double g = 4.0 * x * x * x + y2 * (x - 1.0);
    const double dg = 12.0 * x * x + y2;
    const double step = g / dg;
    x -= step;
    if (std::abs(step) < 1e-16 * std::max(x, 1e-30)) break;
  }
  return std::clamp(x, 0.0, x_hi);
}

// \int_{x_max}^1 f(x) c(x) p(x) dx with 1-x = v^2; omx passed exactly.
double upper_tail_integral(const std::function<double(double, double)>& f,
                           double x_max, const QuadratureConfig& cfg) {
  const double v_max = std::sqrt(1.0 - x_max);
  auto g = [&](double v) {
    const double omx = v * v;
    const double x = 1.0 - omx;
    return 2.0 * f(x, omx) * std::sqrt(x) * (1.0 + 2.0 * omx) / omx;
  };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, 0.0, v_max, static_cast<unsigned>(cfg.max_subdivisions), cfg.abs_tol,
      &err);
}

}  // namespace

JumpLaw::JumpLaw(double eps_cut, int knots, const QuadratureConfig& cfg)
    : eps_cut_(eps_cut) {
  if (!(eps_cut > 0.0))
    throw std::invalid_argument("JumpLaw: eps_cut must be positive");
  if (knots < 16) throw std::invalid_argument("JumpLaw: too few knots");
  x_max_ = std::exp(-eps_cut);
  w_max_ = W_antiderivative(x_max_);
  rate_ = kSqrt2OverPi * w_max_;

  drift_mu_ = kSqrt2OverPi * upper_tail_integral(
                                 [](double, double omx) {
                                   return -std::log1p(-omx);  // -log x
                                 },
                                 x_max_, cfg);
  drift_nu_ = kSqrt2OverPi *
              upper_tail_integral(
                  [](double, double omx) {
                    // -log c(x) = -log(1 - c(1-x))
                    const double c_omx = omx * omx * (3.0 - 2.0 * omx);
                    return -std::log1p(-c_omx);
                  },
                  x_max_, cfg);
  warn_ = drift_mu_ > 0.1 * std::sqrt(2.0 * kPi);

  // inverse CDF at uniform knots, stored as H = x^{3/2}
  const auto K = static_cast<std::size_t>(knots);
  h_.resize(K + 1);
  double x = x_max_;
  h_[K] = std::pow(x_max_, 1.5);
  for (std::size_t i = K; i-- > 0;) {
    const double y = w_max_ * static_cast<double>(i) / static_cast<double>(K);
    x = W_inverse(y, x);
    h_[i] = std::pow(x, 1.5);
  }
  h_[0] = 0.0;

  // Fritsch-Carlson monotone cubic slopes (H is strictly increasing)
  const double hstep = 1.0 / static_cast<double>(K);
  std::vector<double> sec(K);
  for (std::size_t i = 0; i < K; ++i) sec[i] = (h_[i + 1] - h_[i]) / hstep;
  slope_.resize(K + 1);
  slope_[0] = sec[0];
  slope_[K] = sec[K - 1];
  for (std::size_t i = 1; i < K; ++i) slope_[i] = 0.5 * (sec[i - 1] + sec[i]);
  for (std::size_t i = 0; i < K; ++i) {
    if (sec[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / sec[i];
    const double b = slope_[i + 1] / sec[i];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slope_[i] = tau * a * sec[i];
      slope_[i + 1] = tau * b * sec[i];
    }
  }
}

double JumpLaw::sample_x(double u) const {
  const auto K = h_.size() - 1;
  u = std::clamp(u, 0.0, 1.0);
  const double t = u * static_cast<double>(K);
  auto j = static_cast<std::size_t>(t);
  if (j >= K) j = K - 1;
  const double s = t - static_cast<double>(j);
  const double hstep = 1.0 / static_cast<double>(K);
  const double s2 = s * s, s3 = s2 * s;
  const double H = h_[j] * (2 * s3 - 3 * s2 + 1) +
                   hstep * slope_[j] * (s3 - 2 * s2 + s) +
                   h_[j + 1] * (-2 * s3 + 3 * s2) +
                   hstep * slope_[j + 1] * (s3 - s2);
  return std::cbrt(H * H);
}

double JumpLaw::cdf_x(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= x_max_) return 1.0;
  return W_antiderivative(x) / w_max_;
}

SpinePathSample sample_spine_pair(const JumpLaw& law, RngStream& rng,
                                  const SpineConfig& cfg) {
  SpinePathSample path;
  path.drift_mu = law.drift_mu();
  path.drift_nu = law.drift_nu();
  const double b = path.drift_mu;
  const double rate = law.rate();

  double t = 0.0, cm = 0.0, cn = 0.0, integral = 0.0;
  const std::size_t expected =
      static_cast<std::size_t>(rate * 20.0) + 64;
  path.jump_times.reserve(expected);
  path.cum_jump_mu.reserve(expected);
  path.cum_jump_nu.reserve(expected);

  for (;;) {
    const double xi_now = b * t + cm;
    const double tail = (2.0 / b) * std::exp(-0.5 * xi_now);
    if (tail < cfg.tail_tol && t >= cfg.min_horizon) {
      path.horizon = t;
      path.tail_bound = tail;
      break;
    }
    const double dt = rng.exponential(rate);
    // segment [t, t+dt): xi(t') = xi_now + b (t' - t)
    integral += std::exp(-0.5 * xi_now) * (2.0 / b) *
                (-std::expm1(-0.5 * b * dt));
    t += dt;
    const double x = law.sample_x(rng.uniform());
    const double omx = 1.0 - x;
    const double p = -std::log(x);
    const double c_omx = omx * omx * (3.0 - 2.0 * omx);
    const double q = -std::log1p(-c_omx);  // -log c(x)
    cm += p;
    cn += q;
    path.jump_times.push_back(t);
    path.cum_jump_mu.push_back(cm);
    path.cum_jump_nu.push_back(cn);
  }
  path.extinction = integral;
  path.flagged = path.tail_bound > cfg.flag_tail;
  return path;
}

namespace {

std::size_t last_jump_before(const std::vector<double>& times, double t) {
  // count of jump times <= t
  return static_cast<std::size_t>(
      std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

}  // namespace

double SpinePathSample::xi_mu(double t) const {
  const std::size_t k = last_jump_before(jump_times, t);
  return drift_mu * t + (k == 0 ? 0.0 : cum_jump_mu[k - 1]);
}

double SpinePathSample::xi_nu(double t) const {
  const std::size_t k = last_jump_before(jump_times, t);
  return drift_nu * t + (k == 0 ? 0.0 : cum_jump_nu[k - 1]);
}

double SpinePathSample::theta(double s) const {
  if (s <= 0.0) return 0.0;
  const double b = drift_mu;
  double t0 = 0.0, xi0 = 0.0, acc = 0.0;
  for (std::size_t i = 0; i <= jump_times.size(); ++i) {
    const double t1 = i < jump_times.size() ? jump_times[i] : horizon;
    const double seg = std::exp(-0.5 * xi0) * (2.0 / b) *
                       (-std::expm1(-0.5 * b * (t1 - t0)));
    if (acc + seg >= s) {
      const double rem = s - acc;
      const double arg = 1.0 - rem * (0.5 * b) * std::exp(0.5 * xi0);
      if (arg <= 0.0) return t1;
      return t0 - (2.0 / b) * std::log(arg);
    }
    acc += seg;
    if (i < jump_times.size()) {
      t0 = t1;
      xi0 = b * t0 + cum_jump_mu[i];
    }
  }
  return horizon;
}

double extinction_time(const SpinePathSample& path) { return path.extinction; }

std::vector<SpineExponents> dimension_exponent(const SpinePathSample& path,
                                               std::span<const double> eps) {
  const double b = path.drift_mu;
  const std::size_t nj = path.jump_times.size();

  // Segment i covers [start(i), end(i)); segment 0 starts at time 0 and
  // segment nj ends at the horizon. Jump i closes segment i.
  auto seg_start = [&](std::size_t i) {
    return i == 0 ? 0.0 : path.jump_times[i - 1];
  };
  auto seg_end = [&](std::size_t i) {
    return i < nj ? path.jump_times[i] : path.horizon;
  };
  auto seg_cum_mu = [&](std::size_t i) {
    return i == 0 ? 0.0 : path.cum_jump_mu[i - 1];
  };
  auto seg_cum_nu = [&](std::size_t i) {
    return i == 0 ? 0.0 : path.cum_jump_nu[i - 1];
  };

  // suffix[i] = integral of exp(-xi_mu/2) from start(i) to the horizon
  std::vector<double> suffix(nj + 2, 0.0);
  for (std::size_t i = nj + 1; i-- > 0;) {
    if (i > nj) continue;
    const double t0 = seg_start(i), t1 = seg_end(i);
    const double xi0 = b * t0 + seg_cum_mu(i);
    suffix[i] = suffix[i + 1] + std::exp(-0.5 * xi0) * (2.0 / b) *
                                    (-std::expm1(-0.5 * b * (t1 - t0)));
  }

  std::vector<SpineExponents> out;
  out.reserve(eps.size());
  for (const double e : eps) {
    SpineExponents rec{e, 0.0, 0.0};
    if (e > 0.0 && e < suffix[0]) {
      // largest i with suffix[i] >= e (suffix is decreasing)
      std::size_t lo = 0, hi = nj;
      while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (suffix[mid] >= e)
          lo = mid;
        else
          hi = mid - 1;
      }
      const std::size_t i = lo;
      const double t0 = seg_start(i), t1 = seg_end(i);
      const double xi0 = b * t0 + seg_cum_mu(i);
      const double want = e - suffix[i + 1];  // from u to segment end
      const double end_factor = std::exp(-0.5 * b * (t1 - t0));
      const double expu = want * (0.5 * b) * std::exp(0.5 * xi0) + end_factor;
      const double u =
          (expu > 0.0 && expu <= 1.0) ? t0 - (2.0 / b) * std::log(expu) : t1;
      const double le = std::log(e);
      rec.exp_mu = (b * u + seg_cum_mu(i)) / (-le);
      rec.exp_nu = (path.drift_nu * u + seg_cum_nu(i)) / (-le);
    }
    out.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discrete spine
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t kSmallKernelCap = 1024;

// k(b) = 2 P(a,b) C(a,b) with a = m-1-b, walked from b = 0 upward; the
// Catalan-ratio part advances by cheap rational factors.
struct KernelWalk {
  std::int64_t m;
  std::int64_t b = 0;
  double base;  // 2 Cat(a) Cat(b) / Cat(m)

  explicit KernelWalk(std::int64_t m_in)
      : m(m_in),
        base(static_cast<double>(m + 1) / static_cast<double>(2 * m - 1)) {}

  double mass() const { return base * c_weight_f(m - 1 - b, b); }

  void advance() {
    const std::int64_t a = m - 1 - b;  // current a, next is a-1
    base *= (2.0 * static_cast<double>(2 * b + 1) /
             static_cast<double>(b + 2)) *
            (static_cast<double>(a + 1) / (2.0 * static_cast<double>(2 * a - 1)));
    ++b;
  }
};

const std::vector<std::vector<double>>& kernel_cdf_cache() {
  static const std::vector<std::vector<double>> cache = [] {
    std::vector<std::vector<double>> c(kSmallKernelCap + 1);
    for (std::int64_t m = 1; m <= kSmallKernelCap; ++m) {
      auto& row = c[static_cast<std::size_t>(m)];
      row.resize(static_cast<std::size_t>(m));
      KernelWalk walk(m);
      double acc = 0.0;
      for (std::int64_t b = 0; b < m; ++b) {
        acc += walk.mass();
        row[static_cast<std::size_t>(b)] = acc;
        if (b + 1 < m) walk.advance();
      }
      for (double& v : row) v /= acc;  // kill rounding drift; acc ~ 1
    }
    return c;
  }();
  return cache;
}

std::int64_t kernel_sample_sibling(std::int64_t m, RngStream& rng) {
  const double u = rng.uniform();
  if (m <= kSmallKernelCap) {
    const auto& row = kernel_cdf_cache()[static_cast<std::size_t>(m)];
    return static_cast<std::int64_t>(
        std::upper_bound(row.begin(), row.end(), u) - row.begin());
  }
  KernelWalk walk(m);
  double acc = 0.0;
  for (;;) {
    acc += walk.mass();
    if (u < acc || walk.b == m - 1) return walk.b;
    walk.advance();
  }
}

}  // namespace

double spine_kernel_mass(std::int64_t m, std::int64_t a) {
  if (m < 1 || a < 0 || a >= m)
    throw std::invalid_argument("spine_kernel_mass: need 0 <= a < m");
  const std::int64_t b = m - 1 - a;
  return 2.0 * std::exp(split_prob_log(a, b)) * c_weight_f(a, b);
}

DiscreteSpineChain discrete_spine(std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("discrete_spine: n must be >= 1");
  DiscreteSpineChain chain;
  chain.start_size = n;
  std::int64_t m = n;
  chain.sizes.push_back(m);
  while (m > 0) {
    const std::int64_t b = kernel_sample_sibling(m, rng);
    const std::int64_t a = m - 1 - b;
    chain.neg_log_mass -= std::log(c_weight_f(a, b));
    ++chain.steps;
    m = a;
    chain.sizes.push_back(m);
  }
  return chain;
}

}  // namespace leafgrow
