#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "models.hpp"
#include "ruin2d/closedform.hpp"
#include "ruin2d/errors.hpp"
#include "ruin2d/mc.hpp"
#include "ruin2d/onedim.hpp"

using namespace ruin2d;
using doctest::Approx;

namespace {
const ExponentialConstants k0 = exponential_constants(testing::p0());

MCOptions options(std::uint64_t paths, std::uint64_t seed, unsigned threads = 1) {
  MCOptions o;
  o.paths = paths;
  o.seed = seed;
  o.threads = threads;
  return o;
}
}  // namespace

TEST_CASE("streams are pure functions of (seed, stream)") {
  StreamRng a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0);
    CHECK(x < 1);
  }
  CHECK(a.uniform() != c.uniform());
  for (int i = 0; i < 1000; ++i) CHECK(a.below(3) < 3);
}

TEST_CASE("claim samplers reproduce the means") {
  StreamRng rng(1, 0);
  const auto mean_of = [&](const ClaimLaw& law) {
    ClaimSampler s(law);
    double sum = 0;
    for (int i = 0; i < 200000; ++i) sum += s(rng);
    return sum / 200000;
  };
  CHECK(mean_of(ExponentialClaims{2.0}) == Approx(0.5).epsilon(0.01));
  PhaseTypeClaims erlang;
  erlang.beta = Eigen::RowVectorXd(2);
  erlang.beta << 1, 0;
  erlang.B = Eigen::MatrixXd(2, 2);
  erlang.B << -2, 2, 0, -2;
  CHECK(mean_of(erlang) == Approx(claim_mean(erlang)).epsilon(0.01));
  PhaseTypeClaims mix;
  mix.beta = Eigen::RowVectorXd(2);
  mix.beta << 0.3, 0.7;
  mix.B = Eigen::MatrixXd(2, 2);
  mix.B << -1, 0.5, 0.2, -4;
  CHECK(mean_of(mix) == Approx(claim_mean(mix)).epsilon(0.01));
  CHECK(mean_of(EmpiricalClaims{{1.0, 2.0, 6.0}}) == Approx(3.0).epsilon(0.01));
}

TEST_CASE("determinism across thread counts") {
  const auto m = testing::p0();
  const auto a = simulate_joint_ruin(m, 1, 3, 50, options(20000, 9, 1));
  const auto b = simulate_joint_ruin(m, 1, 3, 50, options(20000, 9, 3));
  const auto c = simulate_joint_ruin(m, 1, 3, 50, options(20000, 9, 1));
  CHECK(a.mean == b.mean);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.mean == c.mean);
  const auto d = conditional_survival(m, 1, 3, options(20000, 9, 2));
  const auto e = conditional_survival(m, 1, 3, options(20000, 9, 1));
  CHECK(d.mean == e.mean);
  CHECK(d.standard_error == e.standard_error);
}

TEST_CASE("joint ruin simulation") {
  const auto m = testing::p0();
  const auto zero = simulate_joint_ruin(m, 1, 1, 1e-300, options(10000, 1));
  CHECK(zero.mean == 0.0);
  CHECK(zero.standard_error == 0.0);

  const auto e = simulate_joint_ruin(m, 0, 0, 100, options(1000000, 5, 0));
  CHECK(e.n == 1000000);
  CHECK(e.mean <= 0.5 + 3.5 * e.standard_error);
  CHECK(e.mean >= 0.5 - 3.5 * e.standard_error - e.tail_bound);
  CHECK(e.standard_error == Approx(std::sqrt(e.mean * (1 - e.mean) / (e.n - 1.0))).epsilon(1e-9));
}

TEST_CASE("barrier formulation and the epoch check agree path by path") {
  const auto m = testing::exp_model(1.2, 1.0, 3.0, 1.6, 0.6, 0.4);
  StreamRng rng(17, 0);
  int ruined = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto path = simulate_path(m, 60, rng);
    const double a = first_joint_ruin(path, m, 0.4, 1.1);
    CHECK(a == barrier_crossing_time(path, m, 0.4, 1.1));
    ruined += a != kNoRuin;
  }
  CHECK(ruined > 1000);
}

TEST_CASE("a crafted path: ruin between claims is impossible") {
  const auto m = testing::p0();
  PathSample path;
  path.horizon = 10;
  path.interarrivals = {1.0, 0.5};
  path.claims = {3.5, 3.0};  // U1: 1 + 3 - 3.5 = 0.5, then 0.5 + 1.5 - 3 = -1
  CHECK(first_joint_ruin(path, m, 1, 5) == 1.5);
  const auto ev = path.events();
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].time < ev[1].time);
  CHECK(ev[2].kind == PathEvent::Kind::horizon);
}

TEST_CASE("fluid embedding identities") {
  const auto m = testing::exp_model(1.5, 1.0, 3.0, 1.4, 0.6, 0.4);
  StreamRng rng(23, 0);
  int ruined = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto path = simulate_path(m, 40, rng);
    const double u1 = 0.8, u2 = 1.2;
    const auto f = fluid_embed(path, m, u1, u2);
    const double tau = first_joint_ruin(path, m, u1, u2);
    if (tau == kNoRuin) {
      CHECK(f.ruin_time == kNoRuin);
    } else {
      ++ruined;
      CHECK(f.up_clock_at_ruin == tau);
      CHECK(f.up_clock_at(f.ruin_time) == tau);
    }
    double t = 0, s = 0;
    std::array<double, 2> lo{u1, u2};
    for (std::size_t k = 0; k < path.claims.size(); ++k) {
      t = t + path.interarrivals[k];
      s += path.claims[k];
      lo[0] = std::min(lo[0], reserve(u1, m.c1, m.delta1, t, s));
      lo[1] = std::min(lo[1], reserve(u2, m.c2, m.delta2, t, s));
    }
    CHECK(f.running_min[0] == lo[0]);
    CHECK(f.running_min[1] == lo[1]);
    for (std::size_t k = 1; k < f.phases.size(); ++k) CHECK(f.phases[k] == -f.phases[k - 1]);
    for (std::size_t k = 1; k < f.up_clock.size(); ++k) {
      CHECK(f.up_clock[k] >= f.up_clock[k - 1]);
      CHECK(f.up_clock[k] - f.up_clock[k - 1] <= f.switch_times[k] - f.switch_times[k - 1] + 1e-12);
    }
  }
  CHECK(ruined > 500);

  PathSample empty;
  empty.horizon = 5;
  const auto f = fluid_embed(empty, m, 1, 1);
  CHECK(f.phases == std::vector<int>{1});
  CHECK(f.up_clock_at(3.0) == 3.0);
  CHECK(f.ruin_time == kNoRuin);
}

TEST_CASE("fluid estimator matches direct simulation") {
  const auto m = testing::p0();
  const auto a = simulate_fluid_ruin(m, 1, 2, 0.3, 60, options(100000, 4));
  const auto b = ruin_time_lt(m, 1, 2, 0.3, 60, options(100000, 5));
  CHECK(std::abs(a.mean - b.mean) <= 4 * std::hypot(a.standard_error, b.standard_error));
}

TEST_CASE("ruin-time transform") {
  const auto m = testing::p0();
  const auto s50 = ruin_time_lt(m, 1, 1, 50, 40, options(50000, 2));
  const auto s1 = ruin_time_lt(m, 1, 1, 1, 40, options(50000, 2));
  CHECK(s50.mean <= s1.mean);
  const auto cone = ruin_time_lt(m, 2, 2, 0.5, 40, options(200000, 8));
  CHECK(std::abs(cone.mean - ruin_transform_exp(k0, 2, 0.5)) <= 3.5 * cone.standard_error + cone.bias_bound);
  const auto lt0 = ruin_time_lt(m, 1, 3, 0, 30, options(30000, 6));
  const auto direct = simulate_joint_ruin(m, 1, 3, 30, options(30000, 6));
  CHECK(lt0.mean == direct.mean);
  CHECK(lt0.standard_error == direct.standard_error);
}

TEST_CASE("conditional estimator") {
  const auto m = testing::p0();
  const auto t0 = conditional_survival(m, 1, 1, options(1000, 1));
  CHECK(t0.mean == Approx(0.696735).epsilon(1e-6));
  CHECK(t0.standard_error == 0.0);

  const auto e = conditional_survival(m, 1, 2, options(1000000, 77, 0));
  CHECK(std::abs(e.mean - survival(k0, 1, 2).value) <= 3.5 * e.standard_error);

  int dominated = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = conditional_survival(m, 1, 2, options(100000, seed, 0));
    const auto naive = simulate_joint_ruin(m, 1, 2, 30, options(100000, seed, 0));
    dominated += c.standard_error <= naive.standard_error;
  }
  CHECK(dominated >= 18);

  std::vector<double> means;
  for (std::uint64_t seed = 100; seed < 150; ++seed) means.push_back(conditional_survival(m, 1, 2, options(10000, seed)).mean);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  double ss = 0;
  for (double v : means) ss += (v - grand) * (v - grand);
  const double grand_se = std::sqrt(ss / (means.size() - 1) / means.size());
  CHECK(std::abs(grand - survival(k0, 1, 2).value) <= 3.5 * grand_se);

  RiskModel emp = m;
  emp.claim = EmpiricalClaims{{1.0}};
  CHECK_THROWS_AS(conditional_survival(emp, 1, 2, options(10, 1)), UnsupportedClaimLaw);
  CHECK_THROWS_AS(conditional_survival(m, 2, 1, options(10, 1)), DomainError);
}

TEST_CASE("phase-type conditional estimator") {
  RiskModel m = testing::p0();
  PhaseTypeClaims one;
  one.beta = Eigen::RowVectorXd::Ones(1);
  one.B = Eigen::MatrixXd::Constant(1, 1, -1.0);
  m.claim = one;
  const auto e = conditional_survival(m, 1, 2, options(200000, 12));
  CHECK(std::abs(e.mean - survival(k0, 1, 2).value) <= 3.5 * e.standard_error);
}

TEST_CASE("disjoint streams agree statistically") {
  const auto m = testing::p0();
  for (int rep = 0; rep < 20; ++rep) {
    MCOptions a = options(8192, 99);
    MCOptions b = options(8192, 99);
    a.first_stream = 4 * rep;
    b.first_stream = 4 * rep + 2;
    const auto ea = conditional_survival(m, 1, 2.5, a);
    const auto eb = conditional_survival(m, 1, 2.5, b);
    CHECK(ea.mean != eb.mean);
    CHECK(std::abs(ea.mean - eb.mean) <= 4 * std::hypot(ea.standard_error, eb.standard_error));
  }
}

TEST_CASE("killed position histogram against the resolvent") {
  const auto m = testing::p0();
  const double q = 0.5;
  std::vector<double> edges;
  for (int i = 0; i <= 10; ++i) edges.push_back(0.5 * i);
  const auto h = killed_position_histogram(m, q, 1.0, edges, options(200000, 31));
  int ok = 0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double mass =
        q * testing::simpson([&](double z) { return resolvent_density(k0, q, 1.0, z); }, edges[b], edges[b + 1], 400);
    ok += std::abs(h[b].mean - mass) <= 3.5 * h[b].standard_error;
  }
  CHECK(ok >= 9);
}

TEST_CASE("meta string and tail bound") {
  const auto e = simulate_joint_ruin(testing::p0(), 1, 3, 20, options(5000, 1));
  CHECK(e.meta().find("horizon=20") != std::string::npos);
  CHECK(e.tail_bound > 0);
  CHECK(e.tail_bound < 0.5);
  RiskModel emp = testing::p0();
  emp.claim = EmpiricalClaims{{0.5, 1.5}};
  CHECK(std::isnan(simulate_joint_ruin(emp, 1, 3, 20, options(5000, 1)).tail_bound));
}
