#include "ruin2d/exponent.hpp"

#include <cmath>

#include "ruin2d/errors.hpp"

namespace ruin2d {

double LaplaceExponent::operator()(double theta) const {
  if (!(theta > -mu)) throw DomainError("kappa: theta must exceed -mu");
  return p * theta - lambda * theta / (mu + theta);
}

std::complex<double> LaplaceExponent::operator()(std::complex<double> theta) const {
  return p * theta - lambda * theta / (mu + theta);
}

LaplaceExponent::Roots LaplaceExponent::roots(double level) const {
  // p t^2 + (p mu - lambda - level) t - level mu = 0 after clearing mu + t.
  const double b = p * mu - lambda - level;
  const double c = -level * mu;
  const double disc = b * b - 4.0 * p * c;
  if (disc < 0.0) throw NoRealRoot("kappa(theta) = level has no real root");
  const double sq = std::sqrt(disc);
  // Cancellation-free pairing of the two roots.
  const double qq = -0.5 * (b + std::copysign(sq, b));
  double r1 = qq / p;
  double r2 = qq != 0.0 ? c / qq : -b / p - r1;
  if (r1 > r2) std::swap(r1, r2);
  if (!(r1 > -mu)) throw NoRealRoot("kappa(theta) = level has no root above -mu");
  return {r1, r2};
}

LaplaceExponent laplace_exponent(const ExponentialConstants& k, Company company) {
  return {company == Company::first ? k.p1 : k.p2, k.lambda, k.mu};
}

}  // namespace ruin2d
