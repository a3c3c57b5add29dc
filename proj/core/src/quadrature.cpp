#include "leafgrow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace leafgrow {

namespace {

// Worst-first adaptive bisection over single Gauss-Kronrod panels, with an
// absolute error target. Panels that reach the depth limit are frozen; work
// is additionally bounded by a hard panel cap.
template <unsigned Points>
IntegralEstimate run_gk(const std::function<double(double)>& g, double a,
                        double b, const QuadratureConfig& cfg) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, Points>;
  struct Panel {
    double err, a, b, val;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto eval = [&](double lo, double hi, int depth) {
    double e = 0.0;
    const double v = Rule::integrate(g, lo, hi, 0, 0.0, &e);
    return Panel{e, lo, hi, v, depth};
  };

  constexpr int kPanelCap = 4096;
  std::priority_queue<Panel> live;
  live.push(eval(a, b, 0));
  double frozen_val = 0.0, frozen_err = 0.0, live_err = live.top().err;
  int panels = 1;

  while (live_err + frozen_err > cfg.abs_tol && !live.empty() &&
         panels < kPanelCap) {
    const Panel worst = live.top();
    live.pop();
    live_err -= worst.err;
    if (worst.depth >= cfg.max_subdivisions) {
      frozen_val += worst.val;
      frozen_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel l = eval(worst.a, mid, worst.depth + 1);
    const Panel r = eval(mid, worst.b, worst.depth + 1);
    live_err += l.err + r.err;
    live.push(l);
    live.push(r);
    ++panels;
  }

  IntegralEstimate out{frozen_val, frozen_err + live_err};
  while (!live.empty()) {
    out.value += live.top().val;
    live.pop();
  }
  return out;
}

IntegralEstimate gk(const std::function<double(double)>& g, double a, double b,
                    const QuadratureConfig& cfg) {
  switch (cfg.nodes_per_panel) {
    case 15:
      return run_gk<15>(g, a, b, cfg);
    case 31:
      return run_gk<31>(g, a, b, cfg);
    case 61:
      return run_gk<61>(g, a, b, cfg);
    default:
      throw std::invalid_argument(
          "QuadratureConfig: nodes_per_panel must be 15, 31 or 61");
  }
}

}  // namespace

IntegralEstimate integrate_unit(const UnitIntegrand& f, double q0, double q1,
                                const QuadratureConfig& cfg) {
  IntegralEstimate total{};

  // lower half (0, 1/2], x = u^q0
  if (q0 > 1.0) {
    const double umax = std::pow(0.5, 1.0 / q0);
    auto g = [&](double u) {
      const double x = std::pow(u, q0);
      return q0 * std::pow(u, q0 - 1.0) * f(x, 1.0 - x);
    };
    const auto r = gk(g, 0.0, umax, cfg);
    total.value += r.value;
    total.error += r.error;
  } else {
    const auto r = gk([&](double x) { return f(x, 1.0 - x); }, 0.0, 0.5, cfg);
    total.value += r.value;
    total.error += r.error;
  }

  // upper half [1/2, 1), 1 - x = v^q1
  if (q1 > 1.0) {
    const double vmax = std::pow(0.5, 1.0 / q1);
    auto g = [&](double v) {
      const double omx = std::pow(v, q1);
      return q1 * std::pow(v, q1 - 1.0) * f(1.0 - omx, omx);
    };
    const auto r = gk(g, 0.0, vmax, cfg);
    total.value += r.value;
    total.error += r.error;
  } else {
    const auto r = gk([&](double x) { return f(x, 1.0 - x); }, 0.5, 1.0, cfg);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

IntegralEstimate integrate_symmetric_unit(const UnitIntegrand& f, double q,
                                          const QuadratureConfig& cfg) {
  if (q <= 1.0) {
    const auto r = gk([&](double x) { return f(x, 1.0 - x); }, 0.0, 0.5, cfg);
    return {2.0 * r.value, 2.0 * r.error};
  }
  const double umax = std::pow(0.5, 1.0 / q);
  auto g = [&](double u) {
    const double x = std::pow(u, q);
    return q * std::pow(u, q - 1.0) * f(x, 1.0 - x);
  };
  const auto r = gk(g, 0.0, umax, cfg);
  return {2.0 * r.value, 2.0 * r.error};
}

}  // namespace leafgrow
