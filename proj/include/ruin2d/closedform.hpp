#pragma once

#include <string>
#include <vector>

#include "ruin2d/model.hpp"

namespace ruin2d {

struct OmegaResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool saturated = false;  ///< integrand below exp(-700) on the whole cut; value set to 0
};

/// Oscillatory cut integral of the spectral representation,
///
///   omega(x1, x2) = -(p2 - rho)/pi * int_{q+}^{q-} e^{x1 a(q) + x2 q}
///                   [f(q) sin(b(q) x1) + b(q) cos(b(q) x1)] / (q (q p2 + mu p2 - lambda)) dq.
///
/// Throws ToleranceNotMet if the quadrature budget is exhausted before |error| <= tol.
OmegaResult omega(const ExponentialConstants& k, double x1, double x2, double tol = 1e-10);

struct SurvivalTerm {
  std::string name;
  double value;
};

struct SurvivalResult {
  double value = 0.0;
  Regime regime = Regime::case1;
  double omega = 0.0;
  std::vector<SurvivalTerm> terms;  ///< exponential terms, omega excluded
  double quadrature_error = 0.0;
  bool lower_cone = false;
  bool saturated = false;
};

/// Joint survival probability at normalized reserves (x1, x2), exponential claims.
/// For x2 <= x1 only company 2 can be ruined and 1 - C2 e^{-gamma2 x2} is returned.
SurvivalResult survival(const ExponentialConstants& k, double x1, double x2, double tol = 1e-10);

struct RuinResult {
  double value = 0.0;
  double quadrature_error = 0.0;
  bool clipped = false;  ///< 1 - survival fell outside [0, 1] and was clipped
};

RuinResult ruin(const ExponentialConstants& k, double x1, double x2, double tol = 1e-10);

/// The exponential terms contributed by the poles q = 0 and q = -gamma2 of
/// g(q) and by the one-dimensional part of the first inversion, after the
/// a -> 0 limit. survival = 1 + boundary + pole_zero + pole_minus_gamma2 + omega.
struct ResidueTerms {
  double z1_at_minus_gamma2 = 0.0;  ///< (mu/p2) min(p2^2/p1 - rho, 0)
  double tilde_C2 = 0.0;            ///< C2 + z1(-gamma2)/mu
  double pole_zero = 0.0;           ///< -C1 e^{-gamma1 x1}
  double pole_minus_gamma2 = 0.0;   ///< tilde_C2 e^{z1(-gamma2) x1 - gamma2 x2}
  double boundary = 0.0;            ///< -C2 e^{-gamma2 x2}
};

ResidueTerms residue_terms(const ExponentialConstants& k, double x1, double x2);

}  // namespace ruin2d
