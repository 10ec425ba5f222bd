#include "ruin2d/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ruin2d/errors.hpp"
#include "ruin2d/onedim.hpp"

namespace ruin2d {

namespace {

/// Welford accumulator for one chunk of paths, plus an auxiliary plain sum.
struct PathStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double aux = 0.0;

  void add(double v, double aux_value = 0.0) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
    aux += aux_value;
  }
};

PathStats merge(const PathStats& a, const PathStats& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  PathStats r;
  r.n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * nb / static_cast<double>(r.n);
  r.m2 = a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(r.n);
  r.aux = a.aux + b.aux;
  return r;
}

// Fixed pairwise tree, so the reduction does not depend on the worker count.
PathStats reduce(const std::vector<PathStats>& chunks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return chunks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(reduce(chunks, lo, mid), reduce(chunks, mid, hi));
}

/// Runs `fn(rng, paths, acc)` once per stream-sized chunk and returns the
/// per-chunk accumulators in chunk order.
template <class Acc, class Fn>
std::vector<Acc> run_chunks(const MCOptions& options, const Acc& init, Fn fn) {
  if (options.paths == 0) throw DomainError("Monte Carlo needs at least one path");
  const std::uint64_t chunks = (options.paths + kPathsPerStream - 1) / kPathsPerStream;
  std::vector<Acc> out(chunks, init);
  std::atomic<std::uint64_t> next{0};
  const auto work = [&] {
    for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      StreamRng rng(options.seed, options.first_stream + c);
      const std::uint64_t begin = c * kPathsPerStream;
      const std::uint64_t count = std::min(kPathsPerStream, options.paths - begin);
      fn(rng, count, out[c]);
    }
  };
  const unsigned want = options.threads == 0 ? default_threads() : options.threads;
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, want), chunks));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

template <class PathFn>
MCEstimate estimate(const MCOptions& options, PathFn path_value) {
  const auto chunks = run_chunks(options, PathStats{}, [&](StreamRng& rng, std::uint64_t count, PathStats& acc) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto [v, aux] = path_value(rng);
      acc.add(v, aux);
    }
  });
  const PathStats total = reduce(chunks, 0, chunks.size());
  MCEstimate e;
  e.mean = total.mean;
  e.n = total.n;
  e.seed = options.seed;
  const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  e.standard_error = std::sqrt(var / static_cast<double>(total.n));
  e.tail_bound = total.aux / static_cast<double>(total.n);
  return e;
}

struct Params {
  double lambda, c1, c2, delta1, delta2;
};

Params params_of(const RiskModel& m) { return {m.lambda, m.c1, m.c2, m.delta1, m.delta2}; }

/// Joint ruin time on the fly; draw order matches simulate_path.
/// On survival, `end` receives the normalized reserves at the horizon.
double joint_ruin_time(const Params& p, const ClaimSampler& claim, double u1, double u2, double horizon,
                       StreamRng& rng, std::array<double, 2>* end = nullptr) {
  double t = 0.0;
  double s = 0.0;
  while (true) {
    const double next = t + rng.exponential(p.lambda);
    if (next > horizon) break;
    t = next;
    s += claim(rng);
    if (reserve(u1, p.c1, p.delta1, t, s) < 0.0 || reserve(u2, p.c2, p.delta2, t, s) < 0.0) return t;
  }
  if (end != nullptr) {
    (*end)[0] = reserve(u1, p.c1, p.delta1, horizon, s) / p.delta1;
    (*end)[1] = reserve(u2, p.c2, p.delta2, horizon, s) / p.delta2;
  }
  return kNoRuin;
}

void require_reserves(double a, double b) {
  if (a < 0.0 || b < 0.0) throw InvalidReserve("Monte Carlo: reserves must be nonnegative");
}

}  // namespace

std::string MCEstimate::meta() const {
  std::ostringstream os;
  os.precision(12);
  os << "horizon=" << horizon << ";tail_bound=" << tail_bound << ";bias_bound=" << bias_bound;
  return os.str();
}

unsigned default_threads() {
  if (const char* env = std::getenv("RUIN2D_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ClaimSampler::ClaimSampler(const ClaimLaw& law) : law_(law) {
  if (const auto* ph = std::get_if<PhaseTypeClaims>(&law_)) {
    const auto n = ph->B.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += ph->beta(i);
      initial_.push_back(acc);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rate = -ph->B(i, i);
      rates_.push_back(rate);
      std::vector<double> cum;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) c += ph->B(i, j) / rate;
        cum.push_back(c);
      }
      jumps_.push_back(std::move(cum));  // remaining mass 1 - c is absorption
    }
  } else if (const auto* emp = std::get_if<EmpiricalClaims>(&law_)) {
    if (emp->sizes.empty()) throw InvalidModel("empirical claim law has no sizes");
  }
}

double ClaimSampler::operator()(StreamRng& rng) const {
  if (const auto* e = std::get_if<ExponentialClaims>(&law_)) return rng.exponential(e->mu);
  if (const auto* emp = std::get_if<EmpiricalClaims>(&law_)) return emp->sizes[rng.below(emp->sizes.size())];

  const double u0 = rng.uniform();
  auto state = static_cast<std::size_t>(std::upper_bound(initial_.begin(), initial_.end(), u0) - initial_.begin());
  double size = 0.0;
  while (state < rates_.size()) {
    size += rng.exponential(rates_[state]);
    const auto& cum = jumps_[state];
    state = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), rng.uniform()) - cum.begin());
  }
  return size;
}

std::vector<PathEvent> PathSample::events() const {
  std::vector<PathEvent> ev;
  ev.reserve(claims.size() + 1);
  double t = 0.0;
  for (std::size_t k = 0; k < claims.size(); ++k) {
    t = t + interarrivals[k];
    ev.push_back({t, PathEvent::Kind::claim, claims[k]});
  }
  ev.push_back({horizon, PathEvent::Kind::horizon, 0.0});
  return ev;
}

PathSample simulate_path(const RiskModel& model, double horizon, StreamRng& rng) {
  const ClaimSampler claim(model.claim);
  PathSample path;
  path.horizon = horizon;
  double t = 0.0;
  while (true) {
    const double dt = rng.exponential(model.lambda);
    const double next = t + dt;
    if (next > horizon) break;
    t = next;
    path.interarrivals.push_back(dt);
    path.claims.push_back(claim(rng));
  }
  return path;
}

double first_joint_ruin(const PathSample& path, const RiskModel& model, double u1, double u2) {
  double t = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < path.claims.size(); ++k) {
    t = t + path.interarrivals[k];
    s += path.claims[k];
    if (reserve(u1, model.c1, model.delta1, t, s) < 0.0 || reserve(u2, model.c2, model.delta2, t, s) < 0.0) {
      return t;
    }
  }
  return kNoRuin;
}

double barrier_crossing_time(const PathSample& path, const RiskModel& model, double u1, double u2) {
  double t = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < path.claims.size(); ++k) {
    t = t + path.interarrivals[k];
    s += path.claims[k];
    const double barrier = std::min((u1 + model.c1 * t) / model.delta1, (u2 + model.c2 * t) / model.delta2);
    if (s > barrier) return t;
  }
  return kNoRuin;
}

double FluidPath::up_clock_at(double t) const {
  if (t <= 0.0) return 0.0;
  const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
  if (it == switch_times.end()) return up_clock.back();
  const auto k = static_cast<std::size_t>(it - switch_times.begin()) - 1;
  return phases[k] == 1 ? up_clock[k] + (t - switch_times[k]) : up_clock[k];
}

FluidPath fluid_embed(const PathSample& path, const RiskModel& model, double u1, double u2) {
  FluidPath f;
  const std::array<double, 2> u{u1, u2};
  const std::array<double, 2> c{model.c1, model.c2};
  const std::array<double, 2> delta{model.delta1, model.delta2};
  const auto level = [&](int i, double up, double down) { return reserve(u[i], c[i], delta[i], up, down); };

  double up = 0.0;
  double down = 0.0;
  f.switch_times.push_back(0.0);
  f.up_clock.push_back(0.0);
  f.down_clock.push_back(0.0);
  f.running_min = {u1, u2};

  for (std::size_t k = 0; k < path.claims.size(); ++k) {
    // Up phase: the interarrival time, on the real clock.
    f.phases.push_back(1);
    up = up + path.interarrivals[k];
    f.switch_times.push_back(up + down);
    f.up_clock.push_back(up);
    f.down_clock.push_back(down);
    const std::array<double, 2> top{level(0, up, down), level(1, up, down)};

    // Down phase: slide along (-delta1, -delta2) for as long as the claim is large.
    f.phases.push_back(-1);
    down += path.claims[k];
    f.switch_times.push_back(up + down);
    f.up_clock.push_back(up);
    f.down_clock.push_back(down);
    for (int i = 0; i < 2; ++i) {
      const double bottom = level(i, up, down);
      f.running_min[i] = std::min({f.running_min[i], top[i], bottom});
      if (bottom < 0.0 && f.ruin_time == kNoRuin) {
        // Crossing inside this phase; the other company may cross earlier in it.
        double hit = kNoRuin;
        for (int j = 0; j < 2; ++j) {
          if (level(j, up, down) < 0.0) hit = std::min(hit, top[j] / delta[j]);
        }
        f.ruin_time = f.switch_times[f.switch_times.size() - 2] + hit;
        f.up_clock_at_ruin = up;
      }
    }
  }
  // Final up phase closes at the horizon on the up clock.
  f.phases.push_back(1);
  const double remaining = path.horizon - up;
  f.switch_times.push_back(up + down + remaining);
  f.up_clock.push_back(up + remaining);
  f.down_clock.push_back(down);
  for (int i = 0; i < 2; ++i) {
    f.running_min[i] = std::min(f.running_min[i], level(i, up + remaining, down));
  }
  return f;
}

MCEstimate simulate_joint_ruin(const RiskModel& model, double u1, double u2, double horizon,
                               const MCOptions& options) {
  require_reserves(u1, u2);
  if (!(horizon >= 0.0)) throw DomainError("simulate_joint_ruin: horizon must be nonnegative");
  const Params p = params_of(model);
  const ClaimSampler claim(model.claim);
  const bool bound = model.is_exponential() && validate(model).ok;
  const ExponentialConstants k = bound ? exponential_constants(model) : ExponentialConstants{};
  auto e = estimate(options, [&](StreamRng& rng) {
    std::array<double, 2> end{};
    const double tau = joint_ruin_time(p, claim, u1, u2, horizon, rng, &end);
    if (tau != kNoRuin) return std::pair{1.0, 0.0};
    return std::pair{0.0, bound ? k.C2 * std::exp(-k.gamma2 * std::min(end[0], end[1])) : 0.0};
  });
  e.horizon = horizon;
  if (!bound) e.tail_bound = std::nan("");
  return e;
}

MCEstimate ruin_time_lt(const RiskModel& model, double u1, double u2, double s, double horizon,
                        const MCOptions& options) {
  require_reserves(u1, u2);
  if (s < 0.0) throw DomainError("ruin_time_lt: s must be nonnegative");
  const Params p = params_of(model);
  const ClaimSampler claim(model.claim);
  auto e = estimate(options, [&](StreamRng& rng) {
    const double tau = joint_ruin_time(p, claim, u1, u2, horizon, rng);
    return std::pair{tau == kNoRuin ? 0.0 : std::exp(-s * tau), 0.0};
  });
  e.horizon = horizon;
  e.tail_bound = 0.0;
  e.bias_bound = std::exp(-s * horizon);
  return e;
}

MCEstimate simulate_fluid_ruin(const RiskModel& model, double u1, double u2, double s, double horizon,
                               const MCOptions& options) {
  require_reserves(u1, u2);
  if (s < 0.0) throw DomainError("simulate_fluid_ruin: s must be nonnegative");
  auto e = estimate(options, [&](StreamRng& rng) {
    const FluidPath f = fluid_embed(simulate_path(model, horizon, rng), model, u1, u2);
    return std::pair{f.ruin_time == kNoRuin ? 0.0 : std::exp(-s * f.up_clock_at_ruin), 0.0};
  });
  e.horizon = horizon;
  e.bias_bound = s > 0.0 ? std::exp(-s * horizon) : 0.0;
  e.tail_bound = std::nan("");
  return e;
}

MCEstimate conditional_survival(const RiskModel& model, double x1, double x2, const MCOptions& options) {
  require_reserves(x1, x2);
  if (x2 < x1) throw DomainError("conditional_survival: needs x2 >= x1");
  if (std::holds_alternative<EmpiricalClaims>(model.claim)) {
    throw UnsupportedClaimLaw("conditional_survival needs the exact one-dimensional survival probability");
  }
  const auto derived = derive(model);
  const bool exponential = derived.exponential.has_value();
  const auto survival2 = [&](double x) {
    return exponential ? 1.0 - ruin_prob_exp(*derived.exponential, x, Company::second)
                       : 1.0 - ruin_prob_phasetype(x * model.delta2, model);
  };
  const double horizon = (x2 - x1) / (derived.p1 - derived.p2);
  if (horizon == 0.0) {
    MCEstimate e;
    e.mean = survival2(x1);
    e.n = options.paths;
    e.seed = options.seed;
    e.horizon = 0.0;
    return e;
  }
  const double lambda = model.lambda;
  const double p1 = derived.p1;
  const ClaimSampler claim(model.claim);
  auto e = estimate(options, [&](StreamRng& rng) {
    double t = 0.0;
    double s = 0.0;
    while (true) {
      const double next = t + rng.exponential(lambda);
      if (next > horizon) break;
      t = next;
      s += claim(rng);
      if (x1 + p1 * t - s < 0.0) return std::pair{0.0, 0.0};
    }
    return std::pair{survival2(x1 + p1 * horizon - s), 0.0};
  });
  e.horizon = horizon;
  e.tail_bound = 0.0;
  return e;
}

MCEstimate simulate_single_ruin(const RiskModel& model, Company company, double x, double horizon,
                                const MCOptions& options) {
  if (x < 0.0) throw InvalidReserve("simulate_single_ruin: reserve must be nonnegative");
  const double p = company == Company::first ? model.p1() : model.p2();
  const double lambda = model.lambda;
  const ClaimSampler claim(model.claim);
  auto e = estimate(options, [&](StreamRng& rng) {
    double t = 0.0;
    double s = 0.0;
    while (true) {
      const double next = t + rng.exponential(lambda);
      if (next > horizon) break;
      t = next;
      s += claim(rng);
      if (x + p * t - s < 0.0) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });
  e.horizon = horizon;
  e.tail_bound = std::nan("");
  return e;
}

std::vector<MCEstimate> killed_position_histogram(const RiskModel& model, double q, double x1,
                                                  const std::vector<double>& edges, const MCOptions& options) {
  if (!(q > 0.0)) throw DomainError("killed_position_histogram: q must be positive");
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw DomainError("killed_position_histogram: need sorted bin edges");
  }
  const std::size_t bins = edges.size() - 1;
  const double p1 = model.p1();
  const double lambda = model.lambda;
  const ClaimSampler claim(model.claim);

  const auto chunks = run_chunks(options, std::vector<std::uint64_t>(bins, 0),
                                 [&](StreamRng& rng, std::uint64_t count, std::vector<std::uint64_t>& acc) {
                                   for (std::uint64_t i = 0; i < count; ++i) {
                                     const double kill = rng.exponential(q);
                                     double t = 0.0;
                                     double s = 0.0;
                                     bool alive = true;
                                     while (true) {
                                       const double next = t + rng.exponential(lambda);
                                       if (next > kill) break;
                                       t = next;
                                       s += claim(rng);
                                       if (x1 + p1 * t - s < 0.0) {
                                         alive = false;
                                         break;
                                       }
                                     }
                                     if (!alive) continue;
                                     const double pos = x1 + p1 * kill - s;
                                     const auto it = std::upper_bound(edges.begin(), edges.end(), pos);
                                     if (it == edges.begin() || it == edges.end()) continue;
                                     ++acc[static_cast<std::size_t>(it - edges.begin()) - 1];
                                   }
                                 });
  std::vector<std::uint64_t> counts(bins, 0);
  for (const auto& c : chunks) {
    for (std::size_t b = 0; b < bins; ++b) counts[b] += c[b];
  }
  std::vector<MCEstimate> out(bins);
  const double n = static_cast<double>(options.paths);
  for (std::size_t b = 0; b < bins; ++b) {
    const double p = static_cast<double>(counts[b]) / n;
    out[b].mean = p;
    out[b].standard_error = std::sqrt(p * (1.0 - p) / n);
    out[b].n = options.paths;
    out[b].seed = options.seed;
  }
  return out;
}

}  // namespace ruin2d
