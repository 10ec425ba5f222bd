#include <doctest.h>

#include <cmath>
#include <random>

#include "models.hpp"
#include "ruin2d/closedform.hpp"
#include "ruin2d/errors.hpp"
#include "ruin2d/onedim.hpp"
#include "ruin2d/transform.hpp"

using namespace ruin2d;
using doctest::Approx;

namespace {
const ExponentialConstants k0 = exponential_constants(testing::p0());
const ExponentialConstants k1 = exponential_constants(testing::p1());

double kappa1(const ExponentialConstants& k, double v) { return k.p1 * v - k.lambda * v / (k.mu + v); }
}  // namespace

TEST_CASE("kappa") {
  CHECK(kappa(k0, Company::first, 0) == 0);
  CHECK(kappa(k0, Company::first, 1) == Approx(2.5).epsilon(1e-15));
  CHECK(kappa(k0, Company::second, -0.5) == Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(kappa(k0, Company::first, -1.0), DomainError);
  const auto kap = laplace_exponent(k0, Company::second);
  CHECK(kap.derivative_at_zero() == 1.0);
  // Convexity on a grid.
  for (double t = -0.9; t < 5; t += 0.1) CHECK(kap(t - 0.05) + kap(t + 0.05) - 2 * kap(t) >= 0);
}

TEST_CASE("z_roots at the reference points") {
  const auto r0 = z_roots(k0, 0.0);
  CHECK(r0.z1.real() == Approx(-2.0 / 3).epsilon(1e-14));
  CHECK(std::abs(r0.z2) < 1e-15);
  const auto rg = z_roots(k0, -0.5);
  CHECK(std::abs(rg.z1) < 1e-14);
  CHECK(rg.z2.real() == Approx(1.0 / 6).epsilon(1e-14));
  const auto r4 = z_roots(k0, -0.4);
  CHECK(r4.z1.real() == Approx(-0.163299).epsilon(1e-5));
  CHECK(r4.z2.real() == Approx(0.163299).epsilon(1e-5));
  CHECK(kappa1(k0, r4.z2.real() - 0.4) == Approx(-0.4).epsilon(1e-10));

  // Case 2: z1(-gamma2) = -gamma3, z2(-gamma2) = 0.
  const auto r1 = z_roots(k1, -k1.gamma2);
  CHECK(r1.z1.real() == Approx(-k1.gamma3).epsilon(1e-12));
  CHECK(std::abs(r1.z2) < 1e-12);
}

TEST_CASE("root identities right of the cut") {
  for (const auto* k : {&k0, &k1}) {
    for (int i = 0; i < 50; ++i) {
      const double q = k->q_minus_end + 1e-3 + i * 0.2;
      const auto r = z_roots(*k, q);
      CHECK(std::abs(r.z1.imag()) == 0.0);
      CHECK(r.z1.real() <= r.z2.real());
      const double target = q * (k->p1 - k->p2);
      CHECK(std::abs(kappa1(*k, r.z1.real() + q) - target) <= 1e-10 * std::max(1.0, std::abs(target)));
      CHECK(std::abs(kappa1(*k, r.z2.real() + q) - target) <= 1e-10 * std::max(1.0, std::abs(target)));
      CHECK(std::abs((r.z1 + r.z2).real() - 2 * a_ext(*k, q)) <= 1e-12 * std::max(1.0, std::abs(q)));
      // Product of the roots from the quadratic's coefficients.
      CHECK(std::abs((r.z1 * r.z2).real() - k->p2 * q * (q + k->gamma2) / k->p1) <= 1e-10 * std::max(1.0, q * q));
      if (target >= 0 || q > k->q_minus_end) {
        try {
          CHECK(std::abs(q_plus(*k, target) - q - r.z2.real()) <= 1e-10 * std::max(1.0, std::abs(q)));
        } catch (const NoRealRoot&) {
          FAIL("q_plus has no real root right of the cut");
        }
      }
    }
  }
}

TEST_CASE("q_plus_complex agrees with the real root and solves the equation") {
  for (double r : {0.0, 0.3, 2.0, 10.0}) CHECK(std::abs(q_plus_complex(k0, r) - q_plus(k0, r)) < 1e-12);
  const cplx r(0.7, 1.3);
  const cplx a = q_plus_complex(k0, r);
  const cplx kap = k0.p1 * a - k0.lambda * a / (k0.mu + a);
  CHECK(std::abs(kap - r) < 1e-12);
}

TEST_CASE("cut endpoints are the roots of the discriminant") {
  for (const auto* k : {&k0, &k1}) {
    CHECK(std::abs(root_discriminant(*k, k->q_plus_end)) < 1e-10 * k->q_plus_end * k->q_plus_end);
    CHECK(std::abs(root_discriminant(*k, k->q_minus_end)) < 1e-10);
    const double lo = testing::bisect([&](double q) { return root_discriminant(*k, q).real(); }, k->q_plus_end - 5,
                                      0.5 * (k->q_plus_end + k->q_minus_end));
    const double hi = testing::bisect([&](double q) { return root_discriminant(*k, q).real(); },
                                      0.5 * (k->q_plus_end + k->q_minus_end), -1e-9 + k->q_minus_end * 0.5);
    CHECK(lo == Approx(k->q_plus_end).epsilon(1e-10));
    CHECK(hi == Approx(k->q_minus_end).epsilon(1e-10));
    CHECK(ab(*k, k->q_plus_end).b <= 1e-10);
    CHECK(ab(*k, k->q_minus_end).b <= 1e-10);
    // The factored b agrees with the radicand written out.
    for (double t = 0.05; t < 1; t += 0.1) {
      const double q = k->q_plus_end + t * (k->q_minus_end - k->q_plus_end);
      const double lin = k->p1 * k->mu - k->lambda + (k->p1 + k->p2) * q;
      const double rad = 4 * k->p1 * (k->p2 * q * k->mu + k->p2 * q * q - k->lambda * q) - lin * lin;
      CHECK(ab(*k, q).b == Approx(std::sqrt(rad) / (2 * k->p1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("cut data and branch limits") {
  const auto c = ab(k0, -1.0);
  CHECK(c.a == Approx(0.5).epsilon(1e-14));
  CHECK(c.b == Approx(std::sqrt(3.0) / 6).epsilon(1e-14));
  CHECK(c.f == Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(ab(k0, 0.0), DomainError);
  CHECK_THROWS_AS(ab(k0, -9.0), DomainError);

  const double mid = 0.5 * (k0.q_plus_end + k0.q_minus_end);  // vertex of the discriminant
  for (double q : {-1.0, -0.6, -2.5, -6.0, -7.3}) {
    const auto cd = ab(k0, q);
    // Principal square root: a - ib from above right of the vertex, a + ib left of it.
    const double sign = q > mid ? -1.0 : 1.0;
    for (double eps : {1e-4, 1e-6}) {
      const cplx up = z_roots(k0, cplx(q, eps)).z1;
      const cplx down = z_roots(k0, cplx(q, -eps)).z1;
      CHECK(std::abs(up - cplx(cd.a, sign * cd.b)) <= 20 * eps);
      CHECK(std::abs(down - cplx(cd.a, -sign * cd.b)) <= 20 * eps);
    }
  }
}

TEST_CASE("g") {
  CHECK(g(k0, -0.4).real() == Approx(-5.458763).epsilon(1e-6));
  CHECK(g(k0, -0.4).real() == Approx((1 - 0.4 + z_roots(k0, -0.4).z1.real()) / (-0.4 * (2 - 1 - 0.8))).epsilon(1e-14));
  CHECK_THROWS_AS(g(k0, 0.0), PoleError);
  CHECK_THROWS_AS(g(k0, -0.5), PoleError);
  CHECK_THROWS_AS(g(k0, -1.0), CutError);
  const double a = std::abs(1e3 * g(k0, 1e3));
  const double b = std::abs(1e4 * g(k0, 1e4));
  CHECK(b <= a);
  for (double m = 1e2; m <= 1e4; m *= 1.5) {
    CHECK(std::abs(m * g(k0, m)) < 10);
    CHECK(std::abs(-m * g(k0, -m)) < 10);
    CHECK(std::abs(m * g(k0, cplx(0, m))) < 10);
  }
}

TEST_CASE("pole limits of g by Richardson extrapolation") {
  for (const auto* k : {&k0, &k1}) {
    const auto rt = residue_terms(*k, 1.0, 2.0);
    const auto limit = [&](double pole) {
      const auto at = [&](double h) { return h * g(*k, pole + h).real(); };
      const double h = 1e-4;
      return 2 * at(h / 2) - at(h);
    };
    CHECK(limit(0.0) == Approx(k->C1).epsilon(1e-6));
    CHECK(limit(-k->gamma2) == Approx(-rt.tilde_C2).epsilon(1e-6));
  }
}

TEST_CASE("psi_tilde") {
  CHECK(psi_tilde(k0, 1.0, 1.0).real() == Approx(0.638675).epsilon(1e-6));
  CHECK_THROWS_AS(psi_tilde(k0, -1.0, 1.0), DomainError);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (const auto* k : {&k0, &k1}) {
    const auto e = general_exponent(*k);
    for (int i = 0; i < 20; ++i) {
      const double p = u(gen);
      const double q = u(gen);
      const cplx v = psi_tilde(*k, p, q);
      CHECK(std::abs(v.imag()) < 1e-14);
      CHECK(v.real() > 0);
      CHECK(p * q * v.real() < 1);
      CHECK(std::abs(psi_tilde_general(e, p, q) - v) <= 1e-10 * std::abs(v));
      CHECK(std::abs(psi_tilde_general_unsimplified(e, p, q) - v) <= 1e-10 * std::abs(v));
    }
    const cplx pc(0.4, 2.0), qc(1.1, -3.0);
    CHECK(std::abs(psi_tilde_general(e, pc, qc) - psi_tilde(*k, pc, qc)) <= 1e-10 * std::abs(psi_tilde(*k, pc, qc)));
  }
}

TEST_CASE("euler inversion of a known transform") {
  const auto f = [](cplx s) { return 1.0 / (s + 1.0); };
  for (double t : {0.5, 1.0, 3.0}) CHECK(euler_invert(f, t, 25, 18.4).real() == Approx(std::exp(-t)).epsilon(1e-7));
}

TEST_CASE("numeric double inversion") {
  const auto r = invert_2d(k0, 1, 2);
  CHECK(r.value == Approx(survival(k0, 1, 2).value).epsilon(1e-3));
  CHECK_FALSE(r.convergence_warning);
  CHECK(std::abs(invert_2d(k0, 1, 1.0001).value - (1 - 0.5 * std::exp(-0.5))) < 2e-3);
  CHECK(std::abs(invert_2d(k0, 10, 20).value - 1.0) < 1e-3);
}
