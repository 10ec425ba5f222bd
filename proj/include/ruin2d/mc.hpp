#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ruin2d/exponent.hpp"
#include "ruin2d/model.hpp"
#include "ruin2d/rng.hpp"

namespace ruin2d {

struct MCEstimate {
  double mean = 0.0;
  double standard_error = 0.0;  ///< sample standard deviation / sqrt(n)
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double horizon = std::numeric_limits<double>::infinity();
  /// Finite-horizon runs: estimated mass of ruin events beyond the horizon,
  /// mean of C2 exp(-gamma2 min(x1(T), x2(T))) over surviving paths (NaN when
  /// no exponential bound is available).
  double tail_bound = 0.0;
  /// Deterministic bias bound, e.g. exp(-s T) for a truncated ruin-time transform.
  double bias_bound = 0.0;

  std::string meta() const;
};

struct MCOptions {
  std::uint64_t paths = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;             ///< 0: hardware concurrency
  std::uint64_t first_stream = 0;   ///< offset into the seed's stream sequence
};

/// Number of paths generated from one stream.
inline constexpr std::uint64_t kPathsPerStream = 4096;

/// Draws claim sizes: inversion for exponential claims, the embedded jump
/// chain for phase-type claims, uniform resampling for empirical claims.
class ClaimSampler {
 public:
  explicit ClaimSampler(const ClaimLaw& law);
  double operator()(StreamRng& rng) const;

 private:
  ClaimLaw law_;
  std::vector<double> initial_;               // phase-type: cumulative beta
  std::vector<std::vector<double>> jumps_;    // phase-type: cumulative exit/jump probabilities
  std::vector<double> rates_;                 // phase-type: -B_ii
};

/// u + c * up - delta * down; shared by every path representation so that the
/// same reserve comes out bit-identical.
inline double reserve(double u, double c, double delta, double up_time, double down_time) {
  return u + c * up_time - delta * down_time;
}

struct PathEvent {
  enum class Kind { claim, horizon };
  double time;
  Kind kind;
  double claim_size;  ///< zero for the horizon event
};

/// One realized claim stream up to a horizon: the primitive interarrival
/// times and claim sizes, in draw order.
struct PathSample {
  double horizon = 0.0;
  std::vector<double> interarrivals;  ///< one per claim before the horizon
  std::vector<double> claims;

  std::vector<PathEvent> events() const;
};

PathSample simulate_path(const RiskModel& model, double horizon, StreamRng& rng);

inline constexpr double kNoRuin = std::numeric_limits<double>::infinity();

/// First claim epoch at which U_1 or U_2 is negative; kNoRuin if none.
double first_joint_ruin(const PathSample& path, const RiskModel& model, double u1, double u2);

/// First claim epoch with S(t) > min((u1 + c1 t)/delta1, (u2 + c2 t)/delta2).
double barrier_crossing_time(const PathSample& path, const RiskModel& model, double u1, double u2);

/// Fluid embedding of a path: jumps replaced by descent at rates (delta1, delta2)
/// lasting as long as the claim is large. Phase +1 (up) runs on the real clock.
struct FluidPath {
  std::vector<double> switch_times;  ///< S_0 = 0 < S_1 < ...; the last entry closes the final phase
  std::vector<int> phases;           ///< phase on [S_k, S_{k+1})
  std::vector<double> up_clock;      ///< I(S_k)
  std::vector<double> down_clock;    ///< S_k - I(S_k), accumulated
  double ruin_time = kNoRuin;        ///< first time min(U~1, U~2) < 0
  double up_clock_at_ruin = kNoRuin; ///< I(ruin_time)
  std::array<double, 2> running_min{};

  /// I(t), piecewise linear between switch times.
  double up_clock_at(double t) const;
};

FluidPath fluid_embed(const PathSample& path, const RiskModel& model, double u1, double u2);

/// P(tau <= T) by direct simulation of (U1, U2); ruin is checked at claim epochs,
/// which is exact because both reserves increase between claims.
MCEstimate simulate_joint_ruin(const RiskModel& model, double u1, double u2, double horizon,
                               const MCOptions& options);

/// E[exp(-s tau) 1{tau <= T}]; bias_bound = exp(-s T) bounds the truncation error.
MCEstimate ruin_time_lt(const RiskModel& model, double u1, double u2, double s, double horizon,
                        const MCOptions& options);

/// E[exp(-s I(tau~)) 1{tau~ finite}] from the fluid embedding of each path;
/// the discount runs on the up clock, so this matches ruin_time_lt path by path.
MCEstimate simulate_fluid_ruin(const RiskModel& model, double u1, double u2, double s, double horizon,
                               const MCOptions& options);

/// Unbiased estimator of the joint survival probability at normalized reserves
/// x2 >= x1: simulate X1 up to T = (x2 - x1)/(p1 - p2); a path contributes 0 if
/// X1 went negative and the exact one-dimensional survival of X2 at X1(T)
/// otherwise. Exponential or phase-type claims.
MCEstimate conditional_survival(const RiskModel& model, double x1, double x2, const MCOptions& options);

/// P(tau_i <= T) for one company at normalized reserve x.
MCEstimate simulate_single_ruin(const RiskModel& model, Company company, double x, double horizon,
                                const MCOptions& options);

/// Killing at an independent Exp(q) time e_q: per bin [edges[k], edges[k+1]),
/// the estimate of P(X1 stays nonnegative up to e_q, X1(e_q) in bin). This
/// equals q times the killed resolvent integrated over the bin.
std::vector<MCEstimate> killed_position_histogram(const RiskModel& model, double q, double x1,
                                                  const std::vector<double>& edges, const MCOptions& options);

/// Default worker count: RUIN2D_THREADS if set, else hardware concurrency.
unsigned default_threads();

}  // namespace ruin2d
