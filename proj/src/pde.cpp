#include "ruin2d/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruin2d/errors.hpp"
#include "ruin2d/format.hpp"
#include "ruin2d/onedim.hpp"

namespace ruin2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

MarchResult march_characteristics(const CharacteristicSystem& sys, double dr, double dw, int n_r, int n_w,
                                  int shift, const std::function<double(int)>& top_chi,
                                  const std::function<double(int)>& left_xi) {
  if (!(dr > 0.0) || !(dw > 0.0) || n_r < 1 || n_w < 0) throw DomainError("march: bad lattice");
  if (shift != 0 && shift != 1) throw DomainError("march: shift must be 0 or 1");
  if (shift == 1) n_w = std::min(n_w, n_r);

  MarchResult m;
  m.n_r = n_r;
  m.n_w = n_w;
  m.shift = shift;
  const auto size = static_cast<std::size_t>(n_r + 1) * static_cast<std::size_t>(n_w + 1);
  m.chi.assign(size, kNaN);
  m.xi.assign(size, kNaN);
  const auto at = [&](int i, int j) { return static_cast<std::size_t>(i) * (n_w + 1) + j; };

  // w decreases with j, so a step j-1 -> j integrates chi_w over -dw.
  const double a = dw / 2.0;
  const double b = dr / 2.0;
  const auto fchi = [&](double c, double x) { return sys.chi_chi * c + sys.chi_xi * x; };
  const auto fxi = [&](double c, double x) { return sys.xi_chi * c + sys.xi_xi * x; };

  for (int i = 0; i <= n_r; ++i) {
    const int j_end = shift == 1 ? std::min(i, n_w) : n_w;
    for (int j = 0; j <= j_end; ++j) {
      const bool top = j == 0;
      const bool left = i == shift * j;
      double c = 0.0;
      double x = 0.0;
      if (top && left) {
        c = top_chi(i);
        x = left_xi(j);
      } else if (top) {
        c = top_chi(i);
        const double cp = m.chi[at(i - 1, 0)];
        const double xp = m.xi[at(i - 1, 0)];
        x = (xp + b * (fxi(cp, xp) + sys.xi_chi * c)) / (1.0 - b * sys.xi_xi);
      } else if (left) {
        x = left_xi(j);
        const double cu = m.chi[at(i, j - 1)];
        const double xu = m.xi[at(i, j - 1)];
        c = (cu - a * (fchi(cu, xu) + sys.chi_xi * x)) / (1.0 + a * sys.chi_chi);
      } else {
        const double cu = m.chi[at(i, j - 1)];
        const double xu = m.xi[at(i, j - 1)];
        const double cp = m.chi[at(i - 1, j)];
        const double xp = m.xi[at(i - 1, j)];
        // [1 + a cc, a cx; -b xc, 1 - b xx] (c, x) = rhs
        const double m11 = 1.0 + a * sys.chi_chi;
        const double m12 = a * sys.chi_xi;
        const double m21 = -b * sys.xi_chi;
        const double m22 = 1.0 - b * sys.xi_xi;
        const double r1 = cu - a * fchi(cu, xu);
        const double r2 = xp + b * fxi(cp, xp);
        const double det = m11 * m22 - m12 * m21;
        c = (r1 * m22 - m12 * r2) / det;
        x = (m11 * r2 - m21 * r1) / det;
      }
      m.chi[at(i, j)] = c;
      m.xi[at(i, j)] = x;
    }
  }
  return m;
}

namespace {

MarchResult march_ruin(const ExponentialConstants& k, double lambda, double s, double dr, double dw, int steps) {
  CharacteristicSystem sys;
  sys.chi_chi = lambda + s;
  sys.chi_xi = -lambda;
  sys.xi_chi = k.mu;
  sys.xi_xi = -k.mu;
  return march_characteristics(
      sys, dr, dw, steps, steps, 1, [&](int i) { return ruin_transform_exp(k, i * dr, s, Company::second); },
      [](int) { return 1.0; });
}

}  // namespace

CharacteristicGrid solve(const RiskModel& model, double s, double r_max, int steps, double tol) {
  if (!model.is_exponential()) throw UnsupportedClaimLaw("pde solver needs exponential claims");
  if (!(s >= 0.0)) throw DomainError("pde: s must be nonnegative");
  if (!(r_max > 0.0)) throw DomainError("pde: r_max must be positive");
  if (steps < 2 || steps % 2 != 0) throw DomainError("pde: steps must be a positive even number");
  const auto derived = derive(model);
  const ExponentialConstants& k = derived.exp();

  CharacteristicGrid g;
  g.s = s;
  g.steps = steps;
  g.r_max = r_max;
  g.dr = r_max / steps;
  g.dw = g.dr * model.delta1 / model.c1;
  g.lambda = model.lambda;
  g.mu = k.mu;
  g.c1 = model.c1;
  g.c2 = model.c2;
  g.delta1 = model.delta1;
  g.delta2 = model.delta2;
  g.nodes = march_ruin(k, model.lambda, s, g.dr, g.dw, steps);

  g.h.assign(g.nodes.chi.size(), kNaN);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto idx = static_cast<std::size_t>(i) * (g.nodes.n_w + 1) + j;
      g.h[idx] = std::exp(g.mu * g.r(i) - (g.lambda + s) * g.w(j)) * g.nodes.chi[idx];
    }
  }
  g.corner_gap = std::abs(g.nodes.chi_at(0, 0) - k.C2);

  const MarchResult coarse = march_ruin(k, model.lambda, s, 2.0 * g.dr, 2.0 * g.dw, steps / 2);
  double diff = 0.0;
  for (int i = 0; i <= steps / 2; ++i) {
    for (int j = 0; j <= i; ++j) diff = std::max(diff, std::abs(coarse.chi_at(i, j) - g.nodes.chi_at(2 * i, 2 * j)));
  }
  g.error_estimate = diff / 3.0;
  if (g.error_estimate > tol) {
    throw GridTooCoarse("pde: step-halving estimate " + format_number(g.error_estimate) + " exceeds tolerance " +
                        format_number(tol));
  }
  return g;
}

std::pair<double, double> to_characteristic(const RiskModel& model, double u1, double u2) {
  const double d = model.delta1 * model.c2 - model.delta2 * model.c1;
  return {(model.c2 * u1 - model.c1 * u2) / d, (-model.delta2 * u1 + model.delta1 * u2) / d};
}

double required_r_max(const RiskModel& model, double u1, double u2) { return to_characteristic(model, u1, u2).first; }

double evaluate(const CharacteristicGrid& g, double u1, double u2) {
  if (u1 < 0.0 || u2 < 0.0) throw InvalidReserve("pde evaluate: reserves must be nonnegative");
  if (u2 * g.delta1 < u1 * g.delta2) throw LowerCone("pde evaluate: point lies below the cone; use the 1D formula");
  const double d = g.delta1 * g.c2 - g.delta2 * g.c1;
  const double r = (g.c2 * u1 - g.c1 * u2) / d;
  const double w = std::min(0.0, (-g.delta2 * u1 + g.delta1 * u2) / d);
  const int n = g.steps;
  const double fi = r / g.dr;
  const double fj = -w / g.dw;
  if (fi > n * (1.0 + 1e-12)) throw OutOfFootprint("pde evaluate: point beyond r_max = " + format_number(g.r_max));

  const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, n - 1);
  const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, i0);
  const double tx = std::clamp(fi - i0, 0.0, 1.0);
  double ty = std::clamp(fj - j0, 0.0, 1.0);
  const auto& m = g.nodes;
  if (j0 == i0) {
    // Cut cell: only the triangle (i0,i0), (i0+1,i0), (i0+1,i0+1) lies in the domain.
    ty = std::min(ty, tx);
    const double v00 = m.chi_at(i0, j0);
    const double v10 = m.chi_at(i0 + 1, j0);
    const double v11 = m.chi_at(i0 + 1, j0 + 1);
    return v00 + tx * (v10 - v00) + ty * (v11 - v10);
  }
  const double v00 = m.chi_at(i0, j0);
  const double v10 = m.chi_at(i0 + 1, j0);
  const double v01 = m.chi_at(i0, j0 + 1);
  const double v11 = m.chi_at(i0 + 1, j0 + 1);
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

double interior_residual(const CharacteristicGrid& g) {
  const auto& m = g.nodes;
  double worst = 0.0;
  for (int i = 1; i < g.steps; ++i) {
    for (int j = 1; j + 1 <= i - 1; ++j) {
      const double c = m.chi_at(i, j);
      const double x = m.xi_at(i, j);
      const double chi_w = (m.chi_at(i, j - 1) - m.chi_at(i, j + 1)) / (2.0 * g.dw);
      const double xi_r = (m.xi_at(i + 1, j) - m.xi_at(i - 1, j)) / (2.0 * g.dr);
      worst = std::max(worst, std::abs(chi_w - ((g.lambda + g.s) * c - g.lambda * x)));
      worst = std::max(worst, std::abs(xi_r - g.mu * (c - x)));
    }
  }
  return worst;
}

double boundary_residual(const CharacteristicGrid& g) {
  const auto& m = g.nodes;
  double worst = 0.0;
  for (int i = 2; i <= g.steps; ++i) {
    const double c = m.chi_at(i, i);
    const double chi_w = (-3.0 * c + 4.0 * m.chi_at(i, i - 1) - m.chi_at(i, i - 2)) / (2.0 * g.dw);
    worst = std::max(worst, std::abs(((g.lambda + g.s) * c - chi_w) / g.lambda - 1.0));
  }
  return worst;
}

void write_csv(const CharacteristicGrid& g, std::ostream& out) {
  out << "r,w,u1,u2,chi,xi,h\n";
  for (int i = 0; i <= g.steps; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto idx = static_cast<std::size_t>(i) * (g.nodes.n_w + 1) + j;
      out << format_number(g.r(i)) << ',' << format_number(g.w(j)) << ',' << format_number(g.u1(i, j)) << ','
          << format_number(g.u2(i, j)) << ',' << format_number(g.nodes.chi[idx]) << ','
          << format_number(g.nodes.xi[idx]) << ',' << format_number(g.h[idx]) << '\n';
    }
  }
}

}  // namespace ruin2d
