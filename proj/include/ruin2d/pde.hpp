#pragma once

#include <functional>
#include <utility>
#include <ostream>
#include <vector>

#include "ruin2d/model.hpp"

namespace ruin2d {

/// Linear first-order system on characteristics:
///   chi_w = chi_chi * chi + chi_xi * xi
///   xi_r  = xi_chi  * chi + xi_xi  * xi
struct CharacteristicSystem {
  double chi_chi = 0.0;
  double chi_xi = 0.0;
  double xi_chi = 0.0;
  double xi_xi = 0.0;
};

/// Node values on the lattice r = i dr, w = -j dw. Row j holds nodes
/// i = shift * j .. n_r; everything else is NaN.
struct MarchResult {
  int n_r = 0;
  int n_w = 0;
  int shift = 0;
  std::vector<double> chi;  ///< (n_r + 1) x (n_w + 1), index i * (n_w + 1) + j
  std::vector<double> xi;

  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i <= n_r && j <= n_w && i >= shift * j; }
  double chi_at(int i, int j) const { return chi[static_cast<std::size_t>(i) * (n_w + 1) + j]; }
  double xi_at(int i, int j) const { return xi[static_cast<std::size_t>(i) * (n_w + 1) + j]; }
};

/// Trapezoidal marching: chi is given on the top row j = 0, xi on the left
/// node i = shift * j of every row. shift = 1 gives the triangle i >= j,
/// shift = 0 a rectangle.
MarchResult march_characteristics(const CharacteristicSystem& system, double dr, double dw, int n_r, int n_w,
                                  int shift, const std::function<double(int)>& top_chi,
                                  const std::function<double(int)>& left_xi);

struct CharacteristicGrid {
  double s = 0.0;
  double dr = 0.0;
  double dw = 0.0;
  int steps = 0;  ///< r-steps; the triangle has steps + 1 columns
  double r_max = 0.0;
  double lambda = 0.0, mu = 0.0, c1 = 0.0, c2 = 0.0, delta1 = 0.0, delta2 = 0.0;
  MarchResult nodes;
  std::vector<double> h;      ///< exp(mu r - (lambda + s) w) chi
  double error_estimate = 0.0;  ///< max node difference against the half-resolution grid, over 3
  double corner_gap = 0.0;      ///< |chi(0,0) - C2|

  double r(int i) const { return i * dr; }
  double w(int j) const { return -j * dw; }
  double u1(int i, int j) const { return delta1 * r(i) + c1 * w(j); }
  double u2(int i, int j) const { return delta2 * r(i) + c2 * w(j); }
};

/// Ruin-time transform psi(u1, u2, s) on the triangle 0 <= r <= r_max,
/// -delta1 r / c1 <= w <= 0, with dw = dr delta1 / c1 so the line u1 = 0
/// passes through nodes. Exponential claims only; steps must be even.
/// Throws GridTooCoarse when the halving estimate exceeds tol.
CharacteristicGrid solve(const RiskModel& model, double s, double r_max, int steps, double tol = 1e-4);

/// Interpolated psi(u1, u2, s); triangle interpolation in the cells cut by u1 = 0.
/// Throws LowerCone below the diagonal and OutOfFootprint beyond r_max.
double evaluate(const CharacteristicGrid& grid, double u1, double u2);

/// (r, w) of raw reserves.
std::pair<double, double> to_characteristic(const RiskModel& model, double u1, double u2);

/// Smallest r_max whose footprint contains (u1, u2).
double required_r_max(const RiskModel& model, double u1, double u2);

/// Max over interior nodes of the central-difference residual of both equations.
double interior_residual(const CharacteristicGrid& grid);

/// Max over the line u1 = 0 of |((lambda + s) chi - chi_w)/lambda - 1| with a
/// one-sided second-order chi_w.
double boundary_residual(const CharacteristicGrid& grid);

/// Columns r,w,u1,u2,chi,xi,h.
void write_csv(const CharacteristicGrid& grid, std::ostream& out);

}  // namespace ruin2d
