#include "ruin2d/transform.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ruin2d/errors.hpp"

namespace ruin2d {

double kappa(const ExponentialConstants& k, Company company, double theta) {
  return laplace_exponent(k, company)(theta);
}

cplx branch_sqrt(cplx z) { return std::sqrt(z); }

cplx root_discriminant(const ExponentialConstants& k, cplx q) {
  const cplx lin = k.p2 * q + k.p1 * (q + k.gamma1);
  return lin * lin - 4.0 * k.p1 * k.p2 * q * (q + k.gamma2);
}

RootPair z_roots(const ExponentialConstants& k, cplx q) {
  const cplx lin = k.p2 * q + k.p1 * (q + k.gamma1);
  const cplx sq = branch_sqrt(root_discriminant(k, q));
  return {(-lin - sq) / (2.0 * k.p1), (-lin + sq) / (2.0 * k.p1), q};
}

cplx q_plus_complex(const ExponentialConstants& k, cplx r) {
  const double p = k.p1;
  const cplx b = p * k.mu - k.lambda - r;
  const cplx c = -r * k.mu;
  const cplx sq = branch_sqrt(b * b - 4.0 * p * c);
  const cplx r1 = (-b + sq) / (2.0 * p);
  const cplx r2 = (-b - sq) / (2.0 * p);
  return r1.real() >= r2.real() ? r1 : r2;
}

cplx g(const ExponentialConstants& k, cplx q) {
  constexpr double pole_tol = 1e-12;
  constexpr double cut_tol = 1e-9;
  if (std::abs(q) < pole_tol || std::abs(q + k.gamma2) < pole_tol) throw PoleError("g: q is a pole");
  if (std::abs(q.imag()) <= cut_tol && q.real() >= k.q_plus_end - cut_tol && q.real() <= k.q_minus_end + cut_tol) {
    throw CutError("g: q lies on the branch cut; use ab(q)");
  }
  const cplx z1 = z_roots(k, q).z1;
  return (k.p2 - k.rho) * (k.mu + z1 + q) / (q * (k.mu * k.p2 - k.lambda + k.p2 * q));
}

double a_ext(const ExponentialConstants& k, double q) {
  return -(k.p1 * k.mu - k.lambda + k.p2 * q + k.p1 * q) / (2.0 * k.p1);
}

CutData ab(const ExponentialConstants& k, double q) {
  const double width = k.q_minus_end - k.q_plus_end;
  const double slack = 1e-12 * width;
  if (q < k.q_plus_end - slack || q > k.q_minus_end + slack) throw DomainError("ab: q outside the cut");
  const double lin = k.p1 * k.mu - k.lambda + k.p2 * q + k.p1 * q;
  // Factored radicand (p1 - p2)^2 (q - q+)(q- - q): exact zeros at the ends.
  const double a = -lin / (2.0 * k.p1);
  const double span = std::max(q - k.q_plus_end, 0.0) * std::max(k.q_minus_end - q, 0.0);
  const double b = (k.p1 - k.p2) * std::sqrt(span) / (2.0 * k.p1);
  return {a, b, k.mu + q + a};
}

cplx psi_tilde(const ExponentialConstants& k, cplx p, cplx q) {
  if (!(p.real() > 0.0) || !(q.real() > 0.0)) throw DomainError("psi_tilde: needs Re p > 0 and Re q > 0");
  const auto z = z_roots(k, q);
  return (k.mu + p + q) * (k.p2 - k.rho) / (p * k.p1 * (z.z1 - p) * z.z2);
}

GeneralExponent general_exponent(const ExponentialConstants& k) {
  GeneralExponent e;
  e.p1 = k.p1;
  e.p2 = k.p2;
  const LaplaceExponent k1 = laplace_exponent(k, Company::first);
  e.kappa1_prime0 = k1.derivative_at_zero();
  e.kappa1 = [k1](cplx a) { return k1(a); };
  e.q_plus = [k](cplx r) { return q_plus_complex(k, r); };
  return e;
}

cplx psi_tilde_general(const GeneralExponent& e, cplx p, cplx q) {
  const double kappa2_prime0 = e.kappa1_prime0 + (e.p2 - e.p1);
  const cplx r = q * (e.p1 - e.p2);
  return kappa2_prime0 / (p * (e.kappa1(p + q) - r)) * (1.0 + p / (q - e.q_plus(r)));
}

cplx psi_tilde_general_unsimplified(const GeneralExponent& e, cplx p, cplx q) {
  const cplx r = q * (e.p1 - e.p2);
  const cplx qp = e.q_plus(r);
  const cplx num = (e.kappa1_prime0 + (e.p2 - e.p1)) * (r + (e.p1 - e.p2) * (p - qp));
  const cplx den = p * (r + (e.p2 - e.p1) * qp) * (e.kappa1(p + q) - r);
  return num / den;
}

cplx euler_invert(const std::function<cplx(cplx)>& transform, double t, int terms, double abscissa) {
  if (!(t > 0.0)) throw DomainError("euler_invert: t must be positive");
  const int n = terms;
  const int m = terms;
  const double step = std::numbers::pi / t;
  const double re = abscissa / (2.0 * t);

  std::vector<cplx> partial(static_cast<std::size_t>(n + m + 1));
  cplx sum = transform(cplx(re, 0.0));
  partial[0] = sum;
  for (int j = 1; j <= n + m; ++j) {
    const cplx term = transform(cplx(re, j * step)) + transform(cplx(re, -j * step));
    sum += (j % 2 == 0 ? 1.0 : -1.0) * term;
    partial[static_cast<std::size_t>(j)] = sum;
  }
  // Binomial averaging of the last m+1 partial sums.
  cplx avg = 0.0;
  double binom = 1.0;
  const double scale = std::pow(2.0, -m);
  for (int i = 0; i <= m; ++i) {
    avg += binom * scale * partial[static_cast<std::size_t>(n + i)];
    binom = binom * (m - i) / (i + 1);
  }
  return std::exp(abscissa / 2.0) / (2.0 * t) * avg;
}

namespace {

double invert_nested(const ExponentialConstants& k, double x1, double x2, int terms, double abscissa) {
  const auto outer = [&](cplx q) {
    const auto inner = [&](cplx p) { return psi_tilde(k, p, q); };
    return euler_invert(inner, x1, terms, abscissa);
  };
  return euler_invert(outer, x2, terms, abscissa).real();
}

}  // namespace

InversionResult invert_2d(const ExponentialConstants& k, double x1, double x2, const InversionOptions& options) {
  if (!(x1 > 0.0) || !(x2 > 0.0)) throw DomainError("invert_2d: x1 and x2 must be positive");
  InversionResult res;
  res.value = invert_nested(k, x1, x2, options.terms, options.abscissa);
  const double check = invert_nested(k, x1, x2, options.terms + 5, options.abscissa);
  res.discrepancy = std::abs(res.value - check);
  res.convergence_warning = res.discrepancy > options.warn_threshold;
  return res;
}

}  // namespace ruin2d
