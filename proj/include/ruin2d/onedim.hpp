#pragma once

#include "ruin2d/exponent.hpp"
#include "ruin2d/model.hpp"

namespace ruin2d {

/// psi_i(x) = C_i exp(-gamma_i x) in normalized coordinates.
double ruin_prob_exp(const ExponentialConstants& k, double x, Company company);

/// E[exp(-s tau) 1{tau < inf}] for one company started at normalized reserve x:
/// ((mu + theta_-)/mu) exp(theta_- x), theta_- the negative root of kappa(theta) = s.
/// Reduces to ruin_prob_exp at s = 0.
double ruin_transform_exp(const ExponentialConstants& k, double x, double s,
                          Company company = Company::second);

/// Company 2's ultimate ruin probability at raw reserve u2 for phase-type
/// claims: eta exp((B + b eta) u2 / delta2) 1 with eta = (lambda/p2) beta (-B)^{-1}
/// and b = -B 1. Throws UnsupportedClaimLaw for other laws.
double ruin_prob_phasetype(double u2, const RiskModel& model);

/// q-scale function of X_1 for exponential claims.
///
/// Partial fractions of 1/(kappa_1(alpha) - q) give
///   W(x) = [(mu + t+) e^{t+ x} - (mu + t-) e^{t- x}] / (p1 (t+ - t-))
/// with t- <= 0 <= t+ the roots of kappa_1 = q.
class ScaleFunction {
 public:
  /// Throws DegenerateRoots if the two roots coincide, DomainError for q < 0.
  ScaleFunction(const ExponentialConstants& k, double q);

  double operator()(double x) const;

  double q() const { return q_; }
  double theta_plus() const { return theta_plus_; }
  double theta_minus() const { return theta_minus_; }

 private:
  double q_;
  double mu_;
  double p1_;
  double theta_plus_;
  double theta_minus_;
};

double scale_W(const ExponentialConstants& k, double q, double x);

/// Largest root of kappa_1(alpha) = r. Throws NoRealRoot in the forbidden band.
double q_plus(const ExponentialConstants& k, double r);

/// q-resolvent density of X_1 killed on passing below zero:
/// exp(-q+(q) z) W(x1) - 1{x1 >= z} W(x1 - z).
double resolvent_density(const ExponentialConstants& k, double q, double x1, double z);

/// Laplace transform in the starting point of the survival probability,
/// kappa_i'(0+) / kappa_i(theta).
double survival_lt_check(const ExponentialConstants& k, double theta, Company company);

}  // namespace ruin2d
