#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruin2d/closedform.hpp"
#include "ruin2d/errors.hpp"
#include "ruin2d/format.hpp"
#include "ruin2d/mc.hpp"
#include "ruin2d/model.hpp"
#include "ruin2d/model_io.hpp"
#include "ruin2d/onedim.hpp"
#include "ruin2d/pde.hpp"
#include "ruin2d/transform.hpp"

using namespace ruin2d;

namespace {

enum Exit { kOk = 0, kValidation = 2, kCapability = 3, kTolerance = 4 };

struct ModelSource {
  std::string path;
  std::optional<double> lambda, mu, c1, c2, delta1, delta2;

  RiskModel load() const {
    const bool inline_any = lambda || mu || c1 || c2 || delta1 || delta2;
    if (!path.empty() && inline_any) throw InvalidModel("give either --model or inline parameters, not both");
    if (!path.empty()) return load_model(path);
    if (!lambda || !mu || !c1 || !c2) {
      throw InvalidModel("no model: use --model FILE or --lambda, --mu, --c1, --c2 [--delta1 --delta2]");
    }
    RiskModel m;
    m.lambda = *lambda;
    m.claim = ExponentialClaims{*mu};
    m.c1 = *c1;
    m.c2 = *c2;
    m.delta1 = delta1.value_or(1.0);
    m.delta2 = delta2.value_or(1.0);
    return m;
  }
};

/// Loads the model and runs validation; warnings go to stderr.
RiskModel checked_model(const ModelSource& src) {
  RiskModel m = src.load();
  const auto report = validate(m);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!report.ok) derive(m);  // throws InvalidModel naming the assumptions
  return m;
}

void kv(const std::string& key, double v) { std::cout << key << '=' << format_number(v) << '\n'; }
void kv(const std::string& key, const std::string& v) { std::cout << key << '=' << v << '\n'; }

std::string regime_name(Regime r) { return r == Regime::case1 ? "case1" : "case2"; }

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid needs at least one point per axis");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

int pde_steps(double r_max, double target_dr) {
  int steps = static_cast<int>(std::ceil(r_max / target_dr));
  steps += steps % 2;
  return std::clamp(steps, 8, 4000);
}

std::uint64_t path_count(double v) {
  if (!(v >= 1) || v != std::floor(v) || v > 1e15) throw DomainError("--paths must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

unsigned resolve_threads(unsigned flag) { return flag == 0 ? default_threads() : flag; }

void print_estimate(const MCEstimate& e, const std::string& method) {
  kv("value", e.mean);
  kv("method", method);
  kv("error", e.standard_error);
  std::cout << "n=" << e.n << "\nseed=" << e.seed << '\n';
  kv("meta", e.meta());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint ruin probability of two companies sharing claims"};
  app.require_subcommand(1);
  app.fallthrough();

  ModelSource src;
  unsigned threads = 0;
  app.add_option("--model", src.path, "Model JSON file");
  app.add_option("--lambda", src.lambda, "Claim arrival rate");
  app.add_option("--mu", src.mu, "Exponential claim intensity");
  app.add_option("--c1", src.c1, "Premium rate of company 1");
  app.add_option("--c2", src.c2, "Premium rate of company 2");
  app.add_option("--delta1", src.delta1, "Claim share of company 1");
  app.add_option("--delta2", src.delta2, "Claim share of company 2");
  app.add_option("--threads", threads, "Worker threads (default: RUIN2D_THREADS or hardware)");

  // derive
  auto* derive_cmd = app.add_subcommand("derive", "Print derived constants and regime");
  bool as_json = false;
  derive_cmd->add_flag("--json", as_json, "Machine-readable output");

  // ruin
  auto* ruin_cmd = app.add_subcommand("ruin", "Joint ruin probability or ruin-time transform at raw reserves");
  std::vector<double> u;
  double s = 0.0;
  std::string method;
  double paths = 1e6;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  double horizon = 200.0;
  ruin_cmd->add_option("--u", u, "Reserves u1 u2")->expected(2)->required();
  ruin_cmd->add_option("--s", s, "Discount rate of the ruin time");
  ruin_cmd->add_option("--method", method, "exact|pde|mc|invert")
      ->check(CLI::IsMember({"exact", "pde", "mc", "invert"}));
  ruin_cmd->add_option("--paths", paths, "Monte Carlo paths");
  ruin_cmd->add_option("--seed", seed, "Monte Carlo seed");
  ruin_cmd->add_option("--tol", tol, "Quadrature or grid tolerance")->check(CLI::PositiveNumber);
  ruin_cmd->add_option("--horizon", horizon, "Monte Carlo time horizon");

  // transform
  auto* transform_cmd = app.add_subcommand("transform", "Double Laplace transform of the survival probability");
  double tp = 1.0, tq = 1.0, tp_im = 0.0, tq_im = 0.0;
  transform_cmd->add_option("--p", tp, "Transform variable for x1")->required();
  transform_cmd->add_option("--q", tq, "Transform variable for x2")->required();
  transform_cmd->add_option("--p-im", tp_im, "Imaginary part of p");
  transform_cmd->add_option("--q-im", tq_im, "Imaginary part of q");

  // invert
  auto* invert_cmd = app.add_subcommand("invert", "Survival probability by numeric double inversion");
  std::vector<double> inv_u;
  int terms = 25;
  invert_cmd->add_option("--u", inv_u, "Reserves u1 u2")->expected(2)->required();
  invert_cmd->add_option("--terms", terms, "Euler terms per sum");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate as CSV");
  std::vector<double> sim_u;
  std::string sim_method = "naive";
  double sim_s = 0.0;
  double sim_horizon = 200.0;
  double sim_paths = 1e5;
  std::uint64_t sim_seed = 1;
  sim_cmd->add_option("--u", sim_u, "Reserves u1 u2")->expected(2)->required();
  sim_cmd->add_option("--paths", sim_paths, "Paths");
  sim_cmd->add_option("--seed", sim_seed, "Seed");
  sim_cmd->add_option("--horizon", sim_horizon, "Time horizon (naive, fluid)");
  sim_cmd->add_option("--s", sim_s, "Discount rate of the ruin time");
  sim_cmd->add_option("--method", sim_method, "naive|conditional|fluid")
      ->check(CLI::IsMember({"naive", "conditional", "fluid"}));

  // pde
  auto* pde_cmd = app.add_subcommand("pde", "Characteristic-grid solution; CSV grid or one point");
  double pde_s = 0.0;
  double rmax = 10.0;
  int steps = 400;
  double pde_tol = 1e-4;
  std::vector<double> point;
  pde_cmd->add_option("--s", pde_s, "Discount rate");
  pde_cmd->add_option("--rmax", rmax, "Extent in r");
  pde_cmd->add_option("--steps", steps, "Steps in r (even)");
  pde_cmd->add_option("--tol", pde_tol, "Step-halving tolerance")->check(CLI::PositiveNumber);
  pde_cmd->add_option("--point", point, "Evaluate at u1 u2 instead of printing the grid")->expected(2)->delimiter(',');

  // table
  auto* table_cmd = app.add_subcommand("table", "Closed-form sweep over normalized reserves as CSV");
  std::vector<double> gx1, gx2;
  double table_tol = 1e-10;
  table_cmd->add_option("--x1", gx1, "lo hi n")->expected(3)->required();
  table_cmd->add_option("--x2", gx2, "lo hi n")->expected(3)->required();
  table_cmd->add_option("--tol", table_tol, "Quadrature tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const RiskModel model = checked_model(src);
    MCOptions mc;
    mc.threads = resolve_threads(threads);

    if (*derive_cmd) {
      const auto d = derive(model);
      nlohmann::json j;
      j["p1"] = d.p1;
      j["p2"] = d.p2;
      j["rho"] = d.rho;
      j["d"] = d.d;
      j["regime"] = regime_name(d.regime);
      j["claims"] = claim_law_name(model.claim);
      if (d.exponential) {
        const auto& k = *d.exponential;
        j["lambda"] = k.lambda;
        j["mu"] = k.mu;
        j["gamma1"] = k.gamma1;
        j["gamma2"] = k.gamma2;
        j["gamma3"] = k.gamma3;
        j["C1"] = k.C1;
        j["C2"] = k.C2;
        j["q_plus"] = k.q_plus_end;
        j["q_minus"] = k.q_minus_end;
      }
      if (as_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        for (const auto& [key, value] : j.items()) {
          if (value.is_number()) {
            kv(key, value.get<double>());
          } else {
            kv(key, value.get<std::string>());
          }
        }
      }
      return kOk;
    }

    if (*ruin_cmd) {
      const double u1 = u[0];
      const double u2 = u[1];
      const auto x = normalize(u1, u2, model);
      if (method.empty()) {
        if (!model.is_exponential()) {
          method = "mc";
        } else {
          method = s == 0.0 ? "exact" : "pde";
        }
      }
      if (method == "mc") {
        mc.paths = path_count(paths);
        mc.seed = seed;
        const auto e = s == 0.0 ? simulate_joint_ruin(model, u1, u2, horizon, mc)
                                : ruin_time_lt(model, u1, u2, s, horizon, mc);
        print_estimate(e, "mc");
        return kOk;
      }
      if (!model.is_exponential()) {
        throw UnsupportedClaimLaw("method " + method + " needs exponential claims; use --method mc");
      }
      const ExponentialConstants k = derive(model).exp();
      if (method == "exact") {
        if (s != 0.0) throw UnsupportedClaimLaw("the closed form covers s = 0 only; use --method pde or mc");
        const auto r = ruin(k, x.x1, x.x2, tol);
        kv("value", r.value);
        kv("method", "exact");
        kv("error", r.quadrature_error);
      } else if (method == "invert") {
        if (s != 0.0) throw UnsupportedClaimLaw("numeric inversion covers s = 0 only");
        const auto r = invert_2d(k, x.x1, x.x2);
        kv("value", 1.0 - r.value);
        kv("method", "invert");
        kv("error", r.discrepancy);
        if (r.convergence_warning) std::cerr << "warning: inversion did not settle\n";
      } else {
        double value = 0.0;
        double err = 0.0;
        if (x.x2 <= x.x1) {
          value = ruin_transform_exp(k, x.x2, s, Company::second);
        } else {
          const double r_max = std::max(required_r_max(model, u1, u2), 1e-3);
          const double pde_grid_tol = tol > 1e-6 ? tol : 1e-4;
          const auto grid = solve(model, s, r_max, pde_steps(r_max, 0.02), pde_grid_tol);
          value = evaluate(grid, u1, u2);
          err = grid.error_estimate;
        }
        kv("value", value);
        kv("method", "pde");
        kv("error", err);
      }
      return kOk;
    }

    if (*transform_cmd) {
      const ExponentialConstants k = derive(model).exp();
      const cplx v = psi_tilde(k, cplx(tp, tp_im), cplx(tq, tq_im));
      kv("re", v.real());
      kv("im", v.imag());
      return kOk;
    }

    if (*invert_cmd) {
      const ExponentialConstants k = derive(model).exp();
      const auto x = normalize(inv_u[0], inv_u[1], model);
      InversionOptions opt;
      opt.terms = terms;
      const auto r = invert_2d(k, x.x1, x.x2, opt);
      kv("survival", r.value);
      kv("ruin", 1.0 - r.value);
      kv("discrepancy", r.discrepancy);
      kv("warning", r.convergence_warning ? "true" : "false");
      return kOk;
    }

    if (*sim_cmd) {
      mc.paths = path_count(sim_paths);
      mc.seed = sim_seed;
      const double u1 = sim_u[0];
      const double u2 = sim_u[1];
      MCEstimate e;
      if (sim_method == "naive") {
        e = sim_s == 0.0 ? simulate_joint_ruin(model, u1, u2, sim_horizon, mc)
                         : ruin_time_lt(model, u1, u2, sim_s, sim_horizon, mc);
      } else if (sim_method == "fluid") {
        e = simulate_fluid_ruin(model, u1, u2, sim_s, sim_horizon, mc);
      } else {
        if (sim_s != 0.0) throw UnsupportedClaimLaw("the conditional estimator covers s = 0 only");
        const auto x = normalize(u1, u2, model);
        e = conditional_survival(model, x.x1, x.x2, mc);
        e.mean = 1.0 - e.mean;
      }
      std::cout << "estimate,stderr,n,seed,meta\n"
                << format_number(e.mean) << ',' << format_number(e.standard_error) << ',' << e.n << ',' << e.seed
                << ',' << e.meta() << '\n';
      return kOk;
    }

    if (*pde_cmd) {
      const auto grid = solve(model, pde_s, rmax, steps, pde_tol);
      if (!point.empty()) {
        kv("value", evaluate(grid, point[0], point[1]));
        kv("error", grid.error_estimate);
        kv("corner_gap", grid.corner_gap);
      } else {
        write_csv(grid, std::cout);
      }
      return kOk;
    }

    if (*table_cmd) {
      const ExponentialConstants k = derive(model).exp();
      const auto xs1 = linspace(gx1[0], gx1[1], static_cast<int>(gx1[2]));
      const auto xs2 = linspace(gx2[0], gx2[1], static_cast<int>(gx2[2]));
      const std::size_t rows = xs1.size() * xs2.size();
      std::vector<std::string> lines(rows);
      std::vector<char> failed(rows, 0);
      std::atomic<std::size_t> next{0};
      const auto work = [&] {
        for (std::size_t r = next.fetch_add(1); r < rows; r = next.fetch_add(1)) {
          const double x1 = xs1[r / xs2.size()];
          const double x2 = xs2[r % xs2.size()];
          std::ostringstream line;
          line << format_number(x1) << ',' << format_number(x2) << ',';
          try {
            const auto sv = survival(k, x1, x2, table_tol);
            line << format_number(sv.value) << ',' << format_number(1.0 - sv.value) << ','
                 << format_number(sv.omega) << ',' << format_number(sv.quadrature_error) << ','
                 << regime_name(sv.regime);
          } catch (const ToleranceNotMet&) {
            line << "nan,nan,nan,nan," << regime_name(k.regime);
            failed[r] = 1;
          }
          lines[r] = line.str();
        }
      };
      const unsigned workers = std::max(1u, std::min<unsigned>(mc.threads, static_cast<unsigned>(rows)));
      std::vector<std::thread> pool;
      for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
      work();
      for (auto& th : pool) th.join();

      std::cout << "x1,x2,survival,ruin,omega,quadratureError,regime\n";
      bool any_failed = false;
      for (std::size_t r = 0; r < rows; ++r) {
        std::cout << lines[r] << '\n';
        if (failed[r]) {
          any_failed = true;
          std::cerr << "row " << r << ": quadrature tolerance not met\n";
        }
      }
      return any_failed ? kTolerance : kOk;
    }
  } catch (const InvalidModel& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const UnsupportedClaimLaw& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kCapability;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "tolerance: " << e.what() << '\n';
    return kTolerance;
  } catch (const GridTooCoarse& e) {
    std::cerr << "tolerance: " << e.what() << '\n';
    return kTolerance;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
