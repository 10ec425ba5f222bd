#pragma once

#include <complex>

#include "ruin2d/model.hpp"

namespace ruin2d {

enum class Company { first = 1, second = 2 };

/// kappa(theta) = p theta - lambda theta / (mu + theta), the Laplace exponent
/// of X(t) = x + p t - S(t) with Exp(mu) claims arriving at rate lambda.
struct LaplaceExponent {
  double p = 0.0;
  double lambda = 0.0;
  double mu = 0.0;

  /// Throws DomainError for theta <= -mu.
  double operator()(double theta) const;
  std::complex<double> operator()(std::complex<double> theta) const;

  double derivative_at_zero() const { return p - lambda / mu; }

  struct Roots {
    double minus;  ///< smaller root
    double plus;   ///< larger root
  };

  /// Both real roots of kappa(theta) = level on theta > -mu. Throws NoRealRoot
  /// when the level lies below the minimum of kappa.
  Roots roots(double level) const;
};

LaplaceExponent laplace_exponent(const ExponentialConstants& k, Company company);

}  // namespace ruin2d
