#include "ruin2d/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ruin2d/errors.hpp"

namespace ruin2d {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_phase_type(const PhaseTypeClaims& ph, std::vector<std::string>& out) {
  const auto n = ph.B.rows();
  if (n == 0 || ph.B.cols() != n || ph.beta.size() != n) {
    out.emplace_back("phase-type: beta and B must have matching nonzero dimensions");
    return;
  }
  if ((ph.beta.array() < 0.0).any()) out.emplace_back("phase-type: beta has a negative entry");
  if (ph.beta.sum() > 1.0 + 1e-12) out.emplace_back("phase-type: beta sums to more than 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(ph.B(i, i) < 0.0)) out.emplace_back("phase-type: B has a nonnegative diagonal entry");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && ph.B(i, j) < 0.0) out.emplace_back("phase-type: B has a negative off-diagonal entry");
    }
    if (ph.B.row(i).sum() > 1e-12) out.emplace_back("phase-type: B has a positive row sum");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ph.B);
  if (!lu.isInvertible()) out.emplace_back("phase-type: B is singular");
}

}  // namespace

double claim_mean(const ClaimLaw& law) {
  return std::visit(
      overloaded{
          [](const ExponentialClaims& e) { return 1.0 / e.mu; },
          [](const PhaseTypeClaims& ph) {
            const Eigen::MatrixXd minus_inv = (-ph.B).inverse();
            return (ph.beta * minus_inv * Eigen::VectorXd::Ones(ph.B.rows()))(0);
          },
          [](const EmpiricalClaims& emp) {
            if (emp.sizes.empty()) return std::nan("");
            return std::accumulate(emp.sizes.begin(), emp.sizes.end(), 0.0) /
                   static_cast<double>(emp.sizes.size());
          },
      },
      law);
}

std::string claim_law_name(const ClaimLaw& law) {
  return std::visit(overloaded{
                        [](const ExponentialClaims&) { return std::string("exponential"); },
                        [](const PhaseTypeClaims&) { return std::string("phasetype"); },
                        [](const EmpiricalClaims&) { return std::string("empirical"); },
                    },
                    law);
}

ValidationReport validate(const RiskModel& model) {
  ValidationReport report;
  auto& v = report.violations;
  if (!(model.lambda > 0.0)) v.emplace_back("lambda > 0");
  if (!(model.c1 > 0.0) || !(model.c2 > 0.0)) v.emplace_back("premium rates c1, c2 > 0");
  if (!(model.delta1 > 0.0) || !(model.delta2 > 0.0)) v.emplace_back("claim proportions delta1, delta2 > 0");

  std::visit(overloaded{
                 [&](const ExponentialClaims& e) {
                   if (!(e.mu > 0.0)) v.emplace_back("exponential claims: mu > 0");
                 },
                 [&](const PhaseTypeClaims& ph) { check_phase_type(ph, v); },
                 [&](const EmpiricalClaims& emp) {
                   if (emp.sizes.empty()) {
                     v.emplace_back("empirical claims: at least one claim size");
                   } else {
                     for (double s : emp.sizes) {
                       if (!(s >= 0.0) || !std::isfinite(s)) {
                         v.emplace_back("empirical claims: sizes must be finite and nonnegative");
                         break;
                       }
                     }
                   }
                 },
             },
             model.claim);

  if (v.empty()) {
    const double mean = claim_mean(model.claim);
    if (!(std::isfinite(mean) && mean > 0.0)) v.emplace_back("claim mean finite and positive");
  }
  if (v.empty()) {
    const double p1 = model.p1();
    const double p2 = model.p2();
    const double rho = model.rho();
    if (!(p1 > p2)) {
      std::ostringstream os;
      os << "net-profit ordering p1 = c1/delta1 > p2 = c2/delta2 (got p1=" << p1 << ", p2=" << p2 << ")";
      v.push_back(os.str());
    }
    if (!(p2 > rho)) {
      std::ostringstream os;
      os << "positive safety loading p2 > rho = lambda*E[claim] (got p2=" << p2 << ", rho=" << rho << ")";
      v.push_back(os.str());
    }
  }
  if (model.delta1 > 0.0 && model.delta2 > 0.0 && std::abs(model.delta1 + model.delta2 - 1.0) > 1e-12) {
    report.warnings.emplace_back("delta1 + delta2 != 1; only the ratios p_i = c_i/delta_i enter the results");
  }
  report.ok = v.empty();
  return report;
}

const ExponentialConstants& DerivedConstants::exp() const {
  if (!exponential) throw UnsupportedClaimLaw("constant requires exponential claims");
  return *exponential;
}

ExponentialConstants exponential_constants(double lambda, double mu, double p1, double p2) {
  ExponentialConstants k;
  k.lambda = lambda;
  k.mu = mu;
  k.p1 = p1;
  k.p2 = p2;
  k.rho = lambda / mu;
  k.gamma1 = mu - lambda / p1;
  k.gamma2 = mu - lambda / p2;
  k.gamma3 = (mu / p2) * (k.rho - p2 * p2 / p1);
  k.C1 = lambda / (mu * p1);
  k.C2 = lambda / (mu * p2);
  const double sl = std::sqrt(lambda);
  const double sm = std::sqrt(p1 * mu);
  k.q_plus_end = -(sl + sm) * (sl + sm) / (p1 - p2);
  k.q_minus_end = -(sl - sm) * (sl - sm) / (p1 - p2);
  k.regime = k.rho < p2 * p2 / p1 ? Regime::case1 : Regime::case2;
  return k;
}

DerivedConstants derive(const RiskModel& model) {
  const auto report = validate(model);
  if (!report.ok) {
    std::string msg = "invalid model:";
    for (const auto& s : report.violations) msg += " [" + s + "]";
    throw InvalidModel(msg);
  }
  DerivedConstants dc;
  dc.p1 = model.p1();
  dc.p2 = model.p2();
  dc.rho = model.rho();
  dc.d = model.delta1 * model.c2 - model.delta2 * model.c1;
  dc.regime = dc.rho < dc.p2 * dc.p2 / dc.p1 ? Regime::case1 : Regime::case2;
  if (const auto* e = std::get_if<ExponentialClaims>(&model.claim)) {
    dc.exponential = exponential_constants(model.lambda, e->mu, dc.p1, dc.p2);
  }
  return dc;
}

ExponentialConstants exponential_constants(const RiskModel& model) { return derive(model).exp(); }

NormalizedReserves normalize(double u1, double u2, const RiskModel& model) {
  if (u1 < 0.0 || u2 < 0.0) throw InvalidReserve("reserves must be nonnegative");
  return {u1 / model.delta1, u2 / model.delta2};
}

std::pair<double, double> denormalize(double x1, double x2, const RiskModel& model) {
  return {x1 * model.delta1, x2 * model.delta2};
}

}  // namespace ruin2d
