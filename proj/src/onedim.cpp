#include "ruin2d/onedim.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "ruin2d/errors.hpp"

namespace ruin2d {

double ruin_prob_exp(const ExponentialConstants& k, double x, Company company) {
  if (x < 0.0) throw InvalidReserve("ruin_prob_exp: reserve must be nonnegative");
  return company == Company::first ? k.C1 * std::exp(-k.gamma1 * x) : k.C2 * std::exp(-k.gamma2 * x);
}

double ruin_transform_exp(const ExponentialConstants& k, double x, double s, Company company) {
  if (x < 0.0) throw InvalidReserve("ruin_transform_exp: reserve must be nonnegative");
  if (s < 0.0) throw DomainError("ruin_transform_exp: s must be nonnegative");
  if (s == 0.0) return ruin_prob_exp(k, x, company);
  const double theta = laplace_exponent(k, company).roots(s).minus;
  return (k.mu + theta) / k.mu * std::exp(theta * x);
}

double ruin_prob_phasetype(double u2, const RiskModel& model) {
  const auto* ph = std::get_if<PhaseTypeClaims>(&model.claim);
  if (ph == nullptr) throw UnsupportedClaimLaw("ruin_prob_phasetype needs phase-type claims");
  if (u2 < 0.0) throw InvalidReserve("ruin_prob_phasetype: reserve must be nonnegative");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(-ph->B);
  if (!lu.isInvertible()) throw SingularMatrix("phase-type subgenerator B is singular");

  const auto n = ph->B.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd exit_rates = -ph->B * ones;
  const Eigen::RowVectorXd eta = (model.lambda / model.p2()) * (ph->beta * lu.inverse());
  const Eigen::MatrixXd gen = (ph->B + exit_rates * eta) * (u2 / model.delta2);
  const Eigen::MatrixXd e = gen.exp();
  return (eta * e * ones)(0);
}

ScaleFunction::ScaleFunction(const ExponentialConstants& k, double q) : q_(q), mu_(k.mu), p1_(k.p1) {
  if (q < 0.0) throw DomainError("scale function: q must be nonnegative");
  const auto r = laplace_exponent(k, Company::first).roots(q);
  theta_minus_ = r.minus;
  theta_plus_ = q == 0.0 ? 0.0 : r.plus;
  if (!(theta_plus_ > theta_minus_)) throw DegenerateRoots("scale function: kappa_1 = q has a double root");
}

double ScaleFunction::operator()(double x) const {
  if (x < 0.0) return 0.0;
  return ((mu_ + theta_plus_) * std::exp(theta_plus_ * x) - (mu_ + theta_minus_) * std::exp(theta_minus_ * x)) /
         (p1_ * (theta_plus_ - theta_minus_));
}

double scale_W(const ExponentialConstants& k, double q, double x) { return ScaleFunction(k, q)(x); }

double q_plus(const ExponentialConstants& k, double r) {
  if (r == 0.0) return 0.0;
  return laplace_exponent(k, Company::first).roots(r).plus;
}

double resolvent_density(const ExponentialConstants& k, double q, double x1, double z) {
  if (!(q > 0.0)) throw DomainError("resolvent_density: q must be positive");
  if (x1 < 0.0 || z < 0.0) throw DomainError("resolvent_density: x1, z must be nonnegative");
  const ScaleFunction w(k, q);
  if (x1 < z) return std::exp(-w.theta_plus() * z) * w(x1);
  // The e^{t+ x} parts of the two terms cancel exactly.
  const double tp = w.theta_plus();
  const double tm = w.theta_minus();
  return (k.mu + tm) * std::exp(tm * x1) * (std::exp(-tm * z) - std::exp(-tp * z)) / (k.p1 * (tp - tm));
}

double survival_lt_check(const ExponentialConstants& k, double theta, Company company) {
  if (!(theta > 0.0)) throw DomainError("survival_lt_check: theta must be positive");
  const auto kappa = laplace_exponent(k, company);
  return kappa.derivative_at_zero() / kappa(theta);
}

}  // namespace ruin2d
