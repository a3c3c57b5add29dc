#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "leafgrow/quadrature.hpp"
#include "leafgrow/rational.hpp"

namespace leafgrow {

// typical exponent gamma = 3(2 - sqrt(3)): a leaf sampled from the
// leaf-growth measure of a size-n tree has mass n^{-gamma + o(1)}
inline double gamma_exponent() { return 3.0 * (2.0 - std::sqrt(3.0)); }

// closed-form spectrum value at alpha = 1
inline double beta_at_one() { return 0.5 * (5.0 - std::sqrt(13.0)); }

// I(alpha, beta) = \int_0^1 p(x) (c(x)^{a+1} x^{-b} +
//                  c(1-x)^{a+1} (1-x)^{-b} - 1) dx,
// finite iff beta < 2 alpha + 3/2; strictly increasing in beta.
// Throws std::domain_error on or beyond the divergence boundary.
IntegralEstimate integral_I(double alpha, double beta,
                            const QuadratureConfig& cfg = {});

struct SpectrumResult {
  double alpha = 0.0;
  double beta = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |I(alpha, beta)|
};

// The unique beta with I(alpha, beta) = 0, via downward bracket expansion
// from the divergence boundary, bisection and one secant polish.
SpectrumResult beta_of_alpha(double alpha, const QuadratureConfig& cfg = {});

// Laplace exponent of the mu-spine subordinator,
// Phi(alpha) = (1/sqrt(2 pi)) \int_0^1 (1 - c(x) x^a - c(1-x)(1-x)^a) p dx.
double phi_closed_form(double alpha);  // 2 sqrt2 a Gamma(a+3/2)/Gamma(a+2)
struct PhiResult {
  IntegralEstimate quadrature;
  double closed_form;
};
PhiResult phi(double alpha, const QuadratureConfig& cfg = {});

// gamma as a ratio of quadratures:
//   [ \int (-log c) c p dx ] / [ \int (-log x) c p dx ]  (= gamma; the
// denominator equals pi, so the numerator equals gamma * pi).
struct GammaIntegrals {
  double numerator;
  double denominator;
  double ratio;
};
GammaIntegrals gamma_integrals(const QuadratureConfig& cfg = {});
double gamma_constant(const QuadratureConfig& cfg = {});

// Mean jump of the two spine Levy measures: sqrt(2/pi) \int (-log x) c p dx
// = sqrt(2 pi), and sqrt(2/pi) \int (-log c) c p dx = gamma sqrt(2 pi).
double pi_mu_mean(const QuadratureConfig& cfg = {});
double pi_nu_mean(const QuadratureConfig& cfg = {});

// Both sides of the Beta-function identity
//   \int_0^1 (1 - x^a - (1-x)^a)(x(1-x))^{-3/2} dx
//     = 4a (B(a+1/2, 1/2) - B(3/2, a-1/2)),   a > 1/2.
std::pair<IntegralEstimate, double> beta_identity(double alpha,
                                                  const QuadratureConfig& cfg =
                                                      {});

// ---------------------------------------------------------------------------
// Moments e_n = E[M_n^alpha] of the mass of a leaf-growth-distributed leaf.
// Log-domain O(N^2) recursion
//   e_n = 2 sum_a P(a, n-1-a) C(a, n-1-a)^{alpha+1} e_a.
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kMomentCap = 20000;

struct MomentTable {
  double alpha = 0.0;
  std::vector<double> log_e;  // indices 0..N
};

MomentTable moment_recursion(double alpha, std::int64_t n_max,
                             std::int64_t cap = kMomentCap);

// Exact-rational variant for integer alpha >= -1 (oracle scale).
std::vector<Rational> moment_recursion_exact(int alpha, int n_max);

struct SlopeFit {
  double slope = 0.0;      // least-squares slope of -log e_n vs log n
  double intercept = 0.0;
  std::vector<std::pair<std::int64_t, double>> dyadic;  // -log(e_2n/e_n)/log2
  double dyadic_mean = 0.0;
};

SlopeFit slope_fit(const MomentTable& table, std::int64_t window_lo,
                   std::int64_t window_hi);

}  // namespace leafgrow
