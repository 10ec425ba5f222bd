#pragma once

#include <complex>
#include <functional>

#include "ruin2d/exponent.hpp"
#include "ruin2d/model.hpp"

namespace ruin2d {

using cplx = std::complex<double>;

/// kappa_i(theta); throws DomainError at theta <= -mu.
double kappa(const ExponentialConstants& k, Company company, double theta);

/// Square root used for every branch-sensitive quantity: principal branch,
/// cut along the negative real axis.
cplx branch_sqrt(cplx z);

/// Discriminant of the quadratic whose roots are z_1(q), z_2(q):
/// (p2 q + p1 (q + gamma1))^2 - 4 p1 p2 q (q + gamma2).
cplx root_discriminant(const ExponentialConstants& k, cplx q);

/// Roots of kappa_1(z + q) = q (p1 - p2). z1 takes the minus sign in front
/// of the square root, z2 the plus sign.
struct RootPair {
  cplx z1;
  cplx z2;
  cplx q;
};

RootPair z_roots(const ExponentialConstants& k, cplx q);

/// Largest root of kappa_1(alpha) = r for complex r with Re r >= 0 (the root
/// with the larger real part); agrees with q_plus(k, double) on real r >= 0.
cplx q_plus_complex(const ExponentialConstants& k, cplx r);

/// g(q) = (p2 - rho)(mu + z1(q) + q) / (q (mu p2 - lambda + p2 q)).
/// Throws PoleError near {0, -gamma2} and CutError within 1e-9 of the cut.
cplx g(const ExponentialConstants& k, cplx q);

/// z1 on the cut is a(q) -/+ i b(q); f(q) = mu + q + a(q).
struct CutData {
  double a;
  double b;
  double f;
};

/// Throws DomainError outside [q_plus_end, q_minus_end].
CutData ab(const ExponentialConstants& k, double q);

/// Real extension of a(q) off the cut; z1 + z2 = 2 a_ext(q).
double a_ext(const ExponentialConstants& k, double q);

/// Double Laplace transform of the survival probability, exponential claims:
/// (mu + p + q)(p2 - rho) / (p p1 (z1(q) - p) z2(q)). Needs Re p, Re q > 0.
cplx psi_tilde(const ExponentialConstants& k, cplx p, cplx q);

/// Ingredients of the double transform for a general spectrally positive
/// claims process. Experimental: only the exponential instantiation is tested.
struct GeneralExponent {
  double p1 = 0.0;
  double p2 = 0.0;
  double kappa1_prime0 = 0.0;
  std::function<cplx(cplx)> kappa1;
  std::function<cplx(cplx)> q_plus;  ///< largest root of kappa1(alpha) = r
};

GeneralExponent general_exponent(const ExponentialConstants& k);

/// kappa2'(0+) / (p (kappa1(p+q) - q (p1-p2))) * [1 + p / (q - q+(q (p1-p2)))].
cplx psi_tilde_general(const GeneralExponent& e, cplx p, cplx q);

/// The unsimplified form, with kappa2'(0+) written as kappa1'(0+) + (p2 - p1).
cplx psi_tilde_general_unsimplified(const GeneralExponent& e, cplx p, cplx q);

struct InversionOptions {
  int terms = 25;         ///< M: 2M+1 terms per Euler sum
  double abscissa = 18.4;  ///< A: discretization error about exp(-A)
  double warn_threshold = 1e-3;
};

struct InversionResult {
  double value = 0.0;
  double discrepancy = 0.0;  ///< |value(M) - value(M+5)|
  bool convergence_warning = false;
};

/// Euler-summed Bromwich inversion of a one-variable transform at t > 0.
/// The two-sided sum is used so complex-valued originals are handled too.
cplx euler_invert(const std::function<cplx(cplx)>& transform, double t, int terms, double abscissa);

/// Numeric survival probability from psi_tilde by nested one-dimensional
/// inversions, first in p (x1) then in q (x2). Needs x1 > 0, x2 > 0.
InversionResult invert_2d(const ExponentialConstants& k, double x1, double x2,
                          const InversionOptions& options = {});

}  // namespace ruin2d
