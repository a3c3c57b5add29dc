#pragma once

#include <functional>

namespace leafgrow {

struct QuadratureConfig {
  int max_subdivisions = 15;    // adaptive bisection depth per panel
  int nodes_per_panel = 31;     // Gauss-Kronrod order: 15, 31 or 61
  double endpoint_exponent = 0; // substitution power at singular endpoints;
                                // 0 = choose from the known singularity order
  double abs_tol = 1e-12;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

// Integrand over (0,1) evaluated as f(x, 1-x); the second argument is exact
// near 1 so integrands can cancel stably against it.
using UnitIntegrand = std::function<double(double, double)>;

// \int_0^1 f dx with substitutions x = u^q0 near 0 and 1-x = v^q1 near 1,
// which flatten algebraic endpoint singularities before the adaptive
// Gauss-Kronrod panels run. q0/q1 <= 1 disable the substitution on that side.
IntegralEstimate integrate_unit(const UnitIntegrand& f, double q0, double q1,
                                const QuadratureConfig& cfg = {});

// Same, for f symmetric under x <-> 1-x: integrates 2 \int_0^{1/2} with the
// substitution x = u^q.
IntegralEstimate integrate_symmetric_unit(const UnitIntegrand& f, double q,
                                          const QuadratureConfig& cfg = {});

}  // namespace leafgrow
