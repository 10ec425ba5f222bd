#include "ruin2d/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ruin2d/errors.hpp"
#include "ruin2d/quadrature.hpp"
#include "ruin2d/transform.hpp"

namespace ruin2d {

namespace {

constexpr double kSaturationExponent = -700.0;

void check_pole_free_cut(const ExponentialConstants& k) {
  // 1/q and 1/(q p2 + mu p2 - lambda) vanish at 0 and -gamma2, both right of the cut.
  if (!(k.q_plus_end < k.q_minus_end && k.q_minus_end < -k.gamma2 && -k.gamma2 < 0.0)) {
    throw DomainError("omega: cut [q+, q-] is not left of -gamma2 < 0");
  }
}

}  // namespace

OmegaResult omega(const ExponentialConstants& k, double x1, double x2, double tol) {
  if (x1 < 0.0 || x2 < 0.0) throw InvalidReserve("omega: reserves must be nonnegative");
  if (!(tol > 0.0)) throw DomainError("omega: tolerance must be positive");
  check_pole_free_cut(k);

  const double lo = k.q_plus_end;
  const double hi = k.q_minus_end;
  const double half_width = 0.5 * (hi - lo);
  const double prefactor = -(k.p2 - k.rho) / std::numbers::pi;

  OmegaResult res;
  // The exponent x1 a(q) + x2 q is linear in q, so its maximum sits at an endpoint.
  const auto exponent = [&](double q) { return x1 * a_ext(k, q) + x2 * q; };
  if (std::max(exponent(lo), exponent(hi)) < kSaturationExponent) {
    res.saturated = true;
    return res;
  }

  // q = q+ + w (1 - cos t), t in [0, pi]. Then b(q) = b_scale sin t is smooth up to
  // the endpoints, where the plain variable q has a square-root singularity.
  const double b_scale = (k.p1 - k.p2) * half_width / (2.0 * k.p1);
  const auto integrand = [&](double t) {
    const double q = lo + half_width * (1.0 - std::cos(t));
    const double sin_t = std::sin(t);
    const double a = a_ext(k, q);
    const double b = b_scale * sin_t;
    const double f = k.mu + q + a;
    const double osc = f * std::sin(b * x1) + b * std::cos(b * x1);
    const double denom = q * (q * k.p2 + k.mu * k.p2 - k.lambda);
    return std::exp(x1 * a + x2 * q) * osc / denom * half_width * sin_t;
  };

  QuadratureOptions opts;
  opts.abs_tol = tol / std::abs(prefactor);
  opts.max_panels = 10000;
  // At least a few panels per half-period of sin(b x1).
  opts.initial_panels = std::clamp(static_cast<int>(std::ceil(2.0 * x1 * b_scale / std::numbers::pi)), 4, 2000);

  const auto q = integrate(integrand, 0.0, std::numbers::pi, opts);
  res.value = prefactor * q.value;
  res.abs_error = std::abs(prefactor) * q.abs_error;
  res.panels = q.panels;
  if (!q.converged) {
    std::ostringstream os;
    os << "omega(" << x1 << ", " << x2 << "): error estimate " << res.abs_error << " exceeds tolerance " << tol
       << " after " << q.panels << " panels";
    throw ToleranceNotMet(os.str());
  }
  return res;
}

ResidueTerms residue_terms(const ExponentialConstants& k, double x1, double x2) {
  ResidueTerms r;
  r.z1_at_minus_gamma2 = (k.mu / k.p2) * std::min(k.p2 * k.p2 / k.p1 - k.rho, 0.0);
  r.tilde_C2 = k.C2 + r.z1_at_minus_gamma2 / k.mu;
  r.pole_zero = -k.C1 * std::exp(-k.gamma1 * x1);
  r.pole_minus_gamma2 = r.tilde_C2 * std::exp(r.z1_at_minus_gamma2 * x1 - k.gamma2 * x2);
  r.boundary = -k.C2 * std::exp(-k.gamma2 * x2);
  return r;
}

SurvivalResult survival(const ExponentialConstants& k, double x1, double x2, double tol) {
  if (x1 < 0.0 || x2 < 0.0) throw InvalidReserve("survival: reserves must be nonnegative");
  SurvivalResult res;
  res.regime = k.regime;
  const double ruin2 = k.C2 * std::exp(-k.gamma2 * x2);
  if (x2 <= x1) {
    res.lower_cone = true;
    res.terms = {{"1", 1.0}, {"-C2*exp(-gamma2*x2)", -ruin2}};
    res.value = 1.0 - ruin2;
    return res;
  }

  res.terms = {{"1", 1.0}, {"-C1*exp(-gamma1*x1)", -k.C1 * std::exp(-k.gamma1 * x1)}};
  if (k.regime == Regime::case2) {
    res.terms.push_back({"-C2*exp(-gamma2*x2)", -ruin2});
    res.terms.push_back({"(p2/p1)*exp(-gamma3*x1-gamma2*x2)",
                         k.p2 / k.p1 * std::exp(-k.gamma3 * x1 - k.gamma2 * x2)});
  }
  const auto w = omega(k, x1, x2, tol);
  res.omega = w.value;
  res.quadrature_error = w.abs_error;
  res.saturated = w.saturated;
  double v = w.value;
  for (const auto& t : res.terms) v += t.value;
  res.value = v;
  return res;
}

RuinResult ruin(const ExponentialConstants& k, double x1, double x2, double tol) {
  const auto s = survival(k, x1, x2, tol);
  RuinResult r;
  r.value = 1.0 - s.value;
  r.quadrature_error = s.quadrature_error;
  if (r.value < 0.0 || r.value > 1.0) {
    r.clipped = true;
    r.value = std::clamp(r.value, 0.0, 1.0);
  }
  return r;
}

}  // namespace ruin2d
