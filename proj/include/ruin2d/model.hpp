#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ruin2d {

struct ExponentialClaims {
  double mu = 1.0;  ///< intensity, the reciprocal of the mean claim
};

/// P[sigma > x] = beta exp(B x) 1.
struct PhaseTypeClaims {
  Eigen::RowVectorXd beta;
  Eigen::MatrixXd B;
};

/// Bootstrap law: claims are drawn uniformly from the stored sizes.
struct EmpiricalClaims {
  std::vector<double> sizes;
};

using ClaimLaw = std::variant<ExponentialClaims, PhaseTypeClaims, EmpiricalClaims>;

double claim_mean(const ClaimLaw& law);
std::string claim_law_name(const ClaimLaw& law);

/// Two companies sharing one compound Poisson claim stream.
///
/// Company i receives premium at rate c_i and pays the fraction delta_i of
/// every claim, so U_i(t) = u_i + c_i t - delta_i S(t).
struct RiskModel {
  double lambda = 1.0;
  ClaimLaw claim = ExponentialClaims{};
  double c1 = 0.0;
  double c2 = 0.0;
  double delta1 = 1.0;
  double delta2 = 1.0;

  double p1() const { return c1 / delta1; }
  double p2() const { return c2 / delta2; }
  double rho() const { return lambda * claim_mean(claim); }
  bool is_exponential() const { return std::holds_alternative<ExponentialClaims>(claim); }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

ValidationReport validate(const RiskModel& model);

enum class Regime { case1 = 1, case2 = 2 };

/// Constants of a model with exponential claims, in normalized coordinates
/// x_i = u_i / delta_i. Everything downstream depends only on these.
struct ExponentialConstants {
  double lambda = 0.0;
  double mu = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double rho = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double q_plus_end = 0.0;   ///< left end of the cut
  double q_minus_end = 0.0;  ///< right end of the cut
  Regime regime = Regime::case1;
};

struct DerivedConstants {
  double p1 = 0.0;
  double p2 = 0.0;
  double rho = 0.0;
  double d = 0.0;  ///< delta1 c2 - delta2 c1
  Regime regime = Regime::case1;
  std::optional<ExponentialConstants> exponential;

  /// Throws UnsupportedClaimLaw when the model's claims are not exponential.
  const ExponentialConstants& exp() const;
};

/// Throws InvalidModel listing the violated assumptions.
DerivedConstants derive(const RiskModel& model);

/// Shortcut for derive(model).exp().
ExponentialConstants exponential_constants(const RiskModel& model);

/// Builds the normalized constants directly from (lambda, mu, p1, p2).
ExponentialConstants exponential_constants(double lambda, double mu, double p1, double p2);

struct NormalizedReserves {
  double x1;
  double x2;
};

NormalizedReserves normalize(double u1, double u2, const RiskModel& model);
std::pair<double, double> denormalize(double x1, double x2, const RiskModel& model);

}  // namespace ruin2d
