// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "covert/detection.hpp"
#include "covert/io.hpp"
#include "covert/optimizer.hpp"
#include "covert/verify.hpp"

using namespace covert;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct RunKey {
  ScenarioVariant variant;
  AntennaMode mode;
  Benchmark bench;
  bool operator<(const RunKey& o) const {
    return std::tie(variant, mode, bench) < std::tie(o.variant, o.mode, o.bench);
  }
};

const SolveResult& cached_run(ScenarioVariant v, AntennaMode mode, Benchmark bench) {
  static std::map<RunKey, SolveResult> cache;
  const RunKey key{v, mode, bench};
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, sca_solve(default_scenario(v), mode, bench)).first;
  return it->second;
}

const char* name(ScenarioVariant v) { return v == ScenarioVariant::scenario1 ? "scenario1" : "scenario2"; }

std::vector<RunKey> builtin_runs() {
  std::vector<RunKey> runs;
  for (auto v : {ScenarioVariant::scenario1, ScenarioVariant::scenario2})
    for (auto m : {AntennaMode::single_antenna, AntennaMode::multi_antenna}) runs.push_back({v, m, Benchmark::proposed});
  return runs;
}

std::vector<RunKey> ordering_runs() {
  std::vector<RunKey> runs;
  for (auto b : {Benchmark::proposed, Benchmark::b1_fixed_s, Benchmark::b2_fixed_j, Benchmark::b3_hover_j})
    runs.push_back({ScenarioVariant::scenario1, AntennaMode::single_antenna, b});
  return runs;
}

// ---- 1: closed forms vs Monte-Carlo ---------------------------------------

Outcome criterion1(long trials) {
  VerifyOptions opts;
  opts.trials = trials;
  Outcome out;
  int checked = 0;
  double worst = 0.0;
  for (const auto& group : {mc_single_cases(opts, 5), mc_multi_cases(opts, 5)})
    for (const auto& c : group) {
      ++checked;
      worst = std::max(worst, std::fabs(c.estimate - c.reference) / c.tolerance);
      if (c.verdict != Verdict::pass) {
        out.pass = false;
        out.detail += fmt::format(" {}={}", c.name, to_string(c.verdict));
      }
    }
  out.detail = fmt::format("{} FA/MD estimates at {} trials, worst |err|/band = {:.3f}", checked, trials, worst) +
               out.detail;
  return out;
}

// ---- 2: KL closed form vs covariance oracle --------------------------------

Outcome criterion2() {
  const auto cases = kl_oracle_cases(42, 200);
  double worst = 0.0;
  for (const auto& c : cases) worst = std::max(worst, std::fabs(c.estimate - c.reference) / std::fabs(c.reference));
  return {cases.size() == 200 && worst <= 1e-10, fmt::format("{} grid points, max relative error {:.2e}", cases.size(), worst)};
}

// ---- 3: covertness caps ----------------------------------------------------

Outcome criterion3() {
  const double g1 = gamma_cap_single(0.05, 30);
  const double dep_err = std::fabs(dep_single(g1, 30) - 0.95);
  const double g2 = gamma_cap_multi(0.05, 30);
  const double approx = 2 * 0.05 / std::sqrt(30.0);
  const double rel = std::fabs(g2 - approx) / approx;
  const double kl_res = std::fabs(kl_divergence(g2, 30) - 2 * 0.05 * 0.05);
  return {dep_err <= 1e-10 && rel <= 0.02 && kl_res <= 1e-12,
          fmt::format("gamma_max1 = {:.6e} (|DEP-0.95| = {:.1e}), gamma_max2 = {:.6e} ({:.2f}% from 2eps/sqrt(I)), "
                      "KL residual {:.1e}",
                      g1, dep_err, g2, 100 * rel, kl_res)};
}

// ---- 4: monotone convergence on the built-in scenarios ------------------

Outcome criterion4() {
  Outcome out;
  for (const auto& k : builtin_runs()) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult& r = cached_run(k.variant, k.mode, k.bench);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < r.trace.size(); ++i) worst_drop = std::max(worst_drop, r.trace[i - 1] - r.trace[i]);
    const bool ok = r.status == RunStatus::converged && r.iterations.size() <= 50 && worst_drop <= 1e-9;
    out.pass = out.pass && ok;
    out.detail += fmt::format("{}{}/{}: {} in {} it, rate {:.4f}, max drop {:.1e}, {:.1f}s", out.detail.empty() ? "" : "; ",
                              name(k.variant), to_string(k.mode), to_string(r.status), r.iterations.size(),
                              r.final.objective, worst_drop, secs);
  }
  return out;
}

// ---- 5: scheme ordering ----------------------------------------------------

Outcome criterion5() {
  std::map<Benchmark, double> rate;
  bool converged = true;
  for (const auto& k : ordering_runs()) {
    const SolveResult& r = cached_run(k.variant, k.mode, k.bench);
    converged = converged && r.status == RunStatus::converged;
    rate[k.bench] = r.final.objective;
  }
  const double p = rate[Benchmark::proposed], b1 = rate[Benchmark::b1_fixed_s], b2 = rate[Benchmark::b2_fixed_j],
               b3 = rate[Benchmark::b3_hover_j];
  const bool ok = converged && p >= b3 - 1e-3 && b3 >= b1 - 1e-3 && b3 >= b2 - 1e-3 && p > b1;
  return {ok, fmt::format("scenario1 single: proposed {:.4f}, b3 {:.4f}, b1 {:.4f}, b2 {:.4f}", p, b3, b1, b2)};
}

// ---- 6: robust covertness post-check ---------------------------------------

Outcome criterion6() {
  Outcome out;
  std::vector<RunKey> runs = builtin_runs();
  for (const auto& k : ordering_runs())
    if (k.bench != Benchmark::proposed) runs.push_back(k);
  int converged = 0;
  double worst = 0.0;
  for (const auto& k : runs) {
    const SolveResult& r = cached_run(k.variant, k.mode, k.bench);
    if (r.status != RunStatus::converged) continue;
    ++converged;
    // Independent re-check at 200 samples per (slot, warden).
    const CovertReport rep = verify_covertness(r.final.traj, default_scenario(k.variant), k.mode, 200);
    worst = std::max(worst, rep.max_ratio);
  }
  out.pass = converged == static_cast<int>(runs.size()) && worst <= 1.0 + 1e-6;
  out.detail = fmt::format("{}/{} converged runs, worst sampled gamma/gamma_max = {:.9f}", converged, runs.size(), worst);
  return out;
}

// ---- 7: trend suite --------------------------------------------------------

struct Trend {
  const char* label;
  SweepAxis axis;
  std::vector<double> values;
  AntennaMode mode;
  int direction;  // +1 nondecreasing, -1 nonincreasing
};

Outcome criterion7(int parallelism) {
  const std::vector<Trend> trends{
      {"I", SweepAxis::n_obs, {10, 20, 30, 40}, AntennaMode::single_antenna, -1},
      {"eps", SweepAxis::epsilon, {0.01, 0.05, 0.1}, AntennaMode::single_antenna, +1},
      {"P_J", SweepAxis::p_jam, {0.05, 0.1, 0.2}, AntennaMode::single_antenna, +1},
      {"radius", SweepAxis::radius_scale, {0.5, 1, 2}, AntennaMode::single_antenna, -1},
      {"K", SweepAxis::n_antennas, {1, 2, 4, 6}, AntennaMode::multi_antenna, -1},
  };
  Outcome out;
  for (const auto& t : trends) {
    SweepSpec spec;
    spec.base = load_scenario(R"({"base": "scenario1", "n_slots": 20})");
    spec.axis = t.axis;
    spec.values = t.values;
    spec.mode = t.mode;
    const auto rows = run_sweep(spec, parallelism);
    bool ok = true;
    std::string series;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ok = ok && rows[i].status == "converged";
      if (i > 0) ok = ok && t.direction * (rows[i].min_avg_rate - rows[i - 1].min_avg_rate) >= -1e-3;
      series += fmt::format("{}{:.4f}", i ? "," : "", rows[i].min_avg_rate);
    }
    out.pass = out.pass && ok;
    out.detail += fmt::format("{}{} {} [{}]{}", out.detail.empty() ? "" : "; ", t.label,
                              t.direction > 0 ? "up" : "down", series, ok ? "" : " VIOLATED");
  }
  return out;
}

// ---- 8: linearization property suite ---------------------------------------

Outcome criterion8() {
  std::mt19937_64 rng(8);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double tangency = 0.0;
  int direction_violations = 0;
  for (int i = 0; i < 100; ++i) {
    // R^{L,1}: under-estimates log2(1 + g0 P / d).
    const double g0 = 1e12, p = uni(1e-6, 0.2), dl = uni(1e4, 1e6), d = uni(1e4, 1e6);
    tangency = std::max(tangency, std::fabs(rate_lower_bound(g0, p, dl, dl) - std::log2(1 + g0 * p / dl)));
    direction_violations += rate_lower_bound(g0, p, d, dl) > std::log2(1 + g0 * p / d) + 1e-12;
    // A(n): over-estimates ln(rho0 P).
    const double pl = uni(1e-6, 0.2), pp = uni(1e-9, 0.2);
    tangency = std::max(tangency, std::fabs(log_power_linearization(1e-3, pl, pl) - std::log(1e-3 * pl)));
    direction_violations += log_power_linearization(1e-3, pp, pl) < std::log(1e-3 * pp) - 1e-12;
    // B(n): under-estimates 1/c.
    const double cl = uni(4900, 5e5), c = uni(4900, 5e5);
    tangency = std::max(tangency, std::fabs(inverse_linearization(cl, cl) - 1 / cl));
    direction_violations += inverse_linearization(c, cl) > 1 / c + 1e-18;
    // C_m: under-estimates ||q - w||^2 (tangency relative to its magnitude).
    const Vec2 w(uni(-100, 700), uni(-100, 300)), ql(uni(-100, 700), uni(-100, 300)), q(uni(-100, 700), uni(-100, 300));
    const double dq = (ql - w).squaredNorm();
    tangency = std::max(tangency, std::fabs(distance_sq_linearization(ql, ql, w) - dq) / (1 + dq));
    direction_violations += distance_sq_linearization(q, ql, w) > (q - w).squaredNorm() + 1e-9;
  }
  int agree = 0, decided = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(uni(-2, 2), uni(-2, 2));
    const double theta = uni(0, 3), c_lin = uni(0, 4), v = uni(0, 3), r = uni(0, 0.5);
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sprocedure_matrix(x, theta, c_lin, 1.0, v, r))
                               .eigenvalues()
                               .minCoeff();
    if (std::fabs(min_eig) < 1e-9) continue;
    ++decided;
    agree += (min_eig > 0) == sprocedure_schur_holds(x, theta, c_lin, 1.0, v, r);
  }
  return {tangency <= 1e-12 && direction_violations == 0 && agree == decided && decided >= 990,
          fmt::format("max tangency gap {:.1e}, {} bound-direction violations in 400 samples, Schur vs eigenvalue {}/{}",
                      tangency, direction_violations, agree, decided)};
}

// ---- 9: determinism of the CLI ---------------------------------------------

Outcome criterion9(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "covert_acceptance_det";
  fs::remove_all(root);
  std::vector<std::string> traj, trace;
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = root / std::to_string(i);
    const std::string cmd = fmt::format("\"{}\" solve scenario1 --mode single --bench proposed --seed 42 --out \"{}\"",
                                        cli, dir.string());
    if (std::system(cmd.c_str()) != 0) return {false, "solve exited nonzero: " + cmd};
    traj.push_back(read_file(dir / "trajectory.csv"));
    trace.push_back(strip_timing(read_file(dir / "trace.json")));
  }
  fs::remove_all(root);
  const bool ok = traj[0] == traj[1] && trace[0] == trace[1];
  return {ok, fmt::format("trajectory.csv {} ({} bytes), trace.json without timings {}", traj[0] == traj[1] ? "identical" : "differs",
                          traj[0].size(), trace[0] == trace[1] ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance"};
  std::vector<int> only;
  long trials = 1000000;
  int parallelism = 1;
  std::string cli = COVERT_CLI_PATH;
  app.add_option("--criterion", only, "Run only these criteria (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--trials", trials, "Monte-Carlo trials for criterion 1")->check(CLI::PositiveNumber);
  app.add_option("--parallelism", parallelism, "Sweep workers for criterion 7")->check(CLI::PositiveNumber);
  app.add_option("--cli", cli, "Path to the covert executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"detection closed forms match Monte-Carlo", [&] { return criterion1(trials); }},
      {"KL closed form matches covariance oracle", criterion2},
      {"covertness caps", criterion3},
      {"SCA monotone convergence", criterion4},
      {"scheme ordering", criterion5},
      {"robust covertness post-check", criterion6},
      {"trend suite", [&] { return criterion7(parallelism); }},
      {"linearization property suite", criterion8},
      {"solve determinism", [&] { return criterion9(cli); }},
  };

  int failures = 0;
  for (int i = 0; i < 9; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i + 1) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failures += !o.pass;
    std::cout << fmt::format("{} criterion {}: {} ({})", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
