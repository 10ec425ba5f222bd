#pragma once

#include <functional>

namespace ruin2d {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_panels = 10000;
  int initial_panels = 1;  ///< uniform split before adaptivity starts
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]: the
/// panel with the largest error estimate is bisected until the summed
/// estimate is below max(abs_tol, rel_tol |value|) or the panel budget is
/// spent (converged = false).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Integral over [a, inf) via x = a + t / (1 - t).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       const QuadratureOptions& options = {});

}  // namespace ruin2d
