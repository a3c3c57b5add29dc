#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leafgrow/quadrature.hpp"
#include "leafgrow/rng.hpp"

namespace leafgrow {

struct SpineConfig {
  double eps_cut = 1e-4;    // jumps below this size are drift-compensated
  double tail_tol = 1e-6;   // stop once the certified tail of I is below this
  double flag_tail = 1e-4;  // samples with a worse tail bound get flagged
  double min_horizon = 0.0; // simulate at least this far (slope measurements)
  int knots = 1 << 14;      // inverse-CDF table resolution
};

// Truncated restriction of the mu-spine Levy measure to jumps >= eps_cut.
// The jump is p = -log x with x drawn from the density proportional to
// c(x) p(x) on (0, e^{-eps_cut}]; that density has the exact antiderivative
// W(x) = 2 x^{3/2} / sqrt(1-x), so the table stores the inverse CDF in the
// smooth coordinate H = x^{3/2} at uniform CDF knots (monotone cubic).
class JumpLaw {
 public:
  explicit JumpLaw(double eps_cut, int knots = 1 << 14,
                   const QuadratureConfig& cfg = {});

  double eps_cut() const { return eps_cut_; }
  double x_max() const { return x_max_; }
  double rate() const { return rate_; }          // total jump intensity
  double drift_mu() const { return drift_mu_; }  // compensation, mu side
  double drift_nu() const { return drift_nu_; }  // compensation, nu side
  bool compensation_warning() const { return warn_; }

  double sample_x(double u) const;  // inverse CDF, u in [0,1)
  double cdf_x(double x) const;     // exact: W(x)/W(x_max)

 private:
  double eps_cut_, x_max_, w_max_, rate_, drift_mu_, drift_nu_;
  bool warn_ = false;
  std::vector<double> h_, slope_;  // H knots + monotone-cubic slopes
};

// One sampled pair of coupled subordinator paths. Both processes are the
// compensation drift plus the accumulated jumps; each nu jump is
// -log c(e^{-p}) where p is the simultaneous mu jump.
struct SpinePathSample {
  std::vector<double> jump_times;
  std::vector<double> cum_jump_mu;  // running jump sums at jump times
  std::vector<double> cum_jump_nu;
  double drift_mu = 0.0;
  double drift_nu = 0.0;
  double horizon = 0.0;
  double extinction = 0.0;  // I = int_0^horizon exp(-xi_mu/2) dt
  double tail_bound = 0.0;  // certified bound on the neglected tail
  bool flagged = false;

  double xi_mu(double t) const;
  double xi_nu(double t) const;
  // Lamperti inverse: the time u at which int_0^u exp(-xi_mu/2) reaches s.
  double theta(double s) const;
};

SpinePathSample sample_spine_pair(const JumpLaw& law, RngStream& rng,
                                  const SpineConfig& cfg = {});

double extinction_time(const SpinePathSample& path);

// log X(I - eps) / log eps for both coordinates; trends to 2 (mu) and
// 2*gamma (nu) as eps decreases.
struct SpineExponents {
  double eps;
  double exp_mu;
  double exp_nu;
};
std::vector<SpineExponents> dimension_exponent(const SpinePathSample& path,
                                               std::span<const double> eps);

// Discrete spine: the embedded size chain of the descent toward a
// leaf-growth-distributed leaf. From size m it moves to size a with
// probability 2 P(a, m-1-a) C(a, m-1-a), accumulating -log C; the step count
// is the height of the sampled leaf.
struct DiscreteSpineChain {
  std::int64_t start_size = 0;
  std::int64_t steps = 0;
  double neg_log_mass = 0.0;
  std::vector<std::int64_t> sizes;  // n = m_0 > m_1 > ... > 0
};

DiscreteSpineChain discrete_spine(std::int64_t n, RngStream& rng);

// kernel mass 2 P(a, m-1-a) C(a, m-1-a) (for tests and tabulation)
double spine_kernel_mass(std::int64_t m, std::int64_t a);

}  // namespace leafgrow
