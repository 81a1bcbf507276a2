#include "covert/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <fmt/format.h>

#include "covert/detection.hpp"
#include "covert/errors.hpp"

namespace covert {

namespace {

// Lower limit for the power linearization point (fraction of P_max).
constexpr double kPowerFloor = 1e-9;

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const double d = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(d > 0.0))
    throw ValidationError(fmt::format("environment variable {}='{}' is not a positive number", name, v));
  return d;
}

double max_covert_power(const SlotState& s, const Scenario& scn, AntennaMode mode, double cap) {
  double p = scn.p_max;
  for (const auto& w : scn.wardens) {
    const double near = std::max((s.q_s - w.est_pos).norm() - w.radius, 0.0);
    const double d_min = near * near + scn.s_alt * scn.s_alt;
    const double c_max = jammer_distance_bound(s.q_j, w.est_pos, w.radius, scn.j_alt);
    const double jam = scn.p_jam * scn.ref_gain / c_max;
    const double k = mode == AntennaMode::multi_antenna ? scn.n_antennas : 1.0;
    // k P rho0 / d_min <= cap (sigma^2 + k P_J rho0 / c_max)
    p = std::min(p, cap * (scn.noise_power + k * jam) * d_min / (k * scn.ref_gain));
  }
  return p;
}

void floor_powers(Trajectory& traj, const Scenario& scn) {
  const double floor = kPowerFloor * (scn.p_max > 0.0 ? scn.p_max : 1.0);
  for (auto& s : traj.slots) s.p_s = std::max(s.p_s, floor);
}

}  // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iter: return "max_iter";
    case RunStatus::subproblem_failure: return "subproblem_failure";
  }
  return "unknown";
}

ScaOptions options_from_env(ScaOptions base) {
  base.tol = env_double("COVERT_SCA_TOL", base.tol);
  base.solver.feas_tol = env_double("COVERT_FEAS_TOL", base.solver.feas_tol);
  base.solver.gap_tol = env_double("COVERT_GAP_TOL", base.solver.gap_tol);
  base.max_iter = static_cast<int>(env_double("COVERT_MAX_ITER", base.max_iter));
  return base;
}

Iterate initialize(const Scenario& scn, AntennaMode mode, Benchmark bench) {
  validate_scenario(scn);
  const double cap = covert_cap(scn, mode);
  const auto qs = straight_line(scn.s_start, scn.s_end, scn.n_slots);
  std::vector<Vec2> qj;
  if (bench == Benchmark::b3_hover_j)
    qj.assign(static_cast<std::size_t>(scn.n_slots), 0.5 * (scn.j_start + scn.j_end));
  else
    qj = straight_line(scn.j_start, scn.j_end, scn.n_slots);

  Trajectory traj;
  traj.slots.resize(static_cast<std::size_t>(scn.n_slots));
  for (std::size_t n = 0; n < traj.slots.size(); ++n) {
    auto& s = traj.slots[n];
    s.q_s = qs[n];
    s.q_j = qj[n];
    s.p_s = std::min(scn.p_max, 0.9 * max_covert_power(s, scn, mode, cap));
    if (!(s.p_s >= 0.0)) throw ValidationError("initial power is not a number");
  }
  floor_powers(traj, scn);
  return make_iterate(traj, scn);
}

SolveResult sca_solve(const Scenario& scn, AntennaMode mode, Benchmark bench, const ScaOptions& opts) {
  using clock = std::chrono::steady_clock;
  const double tol = opts.tol > 0.0 ? opts.tol : scn.sca_tol;

  SolveResult res;
  Iterate it = initialize(scn, mode, bench);
  res.trace.push_back(it.objective);
  res.status = RunStatus::max_iter;

  for (int l = 1; l <= opts.max_iter; ++l) {
    const auto t0 = clock::now();
    IterationRecord rec;
    rec.iteration = l;
    const Subproblem sp = assemble_subproblem(scn, it, mode, bench);
    if (opts.check_incumbent)
      rec.incumbent_residual = sp.program.max_violation(sp.point_for(it.traj, scn)).amount;
    SolveOutcome out = solve(sp.program, opts.solver);
    if (out.status == SolveStatus::numerical_limit) {
      // Interior-point stalls near the optimum are usually cured by a looser gap.
      SolveOptions relaxed = opts.solver;
      relaxed.gap_tol = std::max(relaxed.gap_tol, 1e-6);
      SolveOutcome retry = solve(sp.program, relaxed);
      retry.backend_status = out.backend_status + "; retry: " + retry.backend_status;
      out = std::move(retry);
    }
    rec.solver_status = out.backend_status;
    rec.solver_iterations = out.iterations;
    if (out.status != SolveStatus::optimal) {
      rec.accepted = false;
      rec.objective = it.objective;
      rec.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      res.iterations.push_back(rec);
      res.status = RunStatus::subproblem_failure;
      res.failure = fmt::format("iteration {}: {} ({})", l, to_string(out.status), out.backend_status);
      break;
    }
    rec.surrogate = out.objective;
    Trajectory traj = sp.trajectory(out.values, scn);
    floor_powers(traj, scn);
    const double obj = min_avg_rate(traj, scn);
    rec.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    if (obj < it.objective) {
      // Only solver inaccuracy can produce a decrease; keep the incumbent.
      rec.accepted = false;
      rec.objective = it.objective;
      res.iterations.push_back(rec);
      ++res.rejected_steps;
      res.status = RunStatus::converged;
      break;
    }
    const double improvement = obj - it.objective;
    it = make_iterate(traj, scn);
    rec.objective = it.objective;
    res.iterations.push_back(rec);
    res.trace.push_back(it.objective);
    if (improvement < tol) {
      res.status = RunStatus::converged;
      break;
    }
  }
  res.final = std::move(it);
  res.covert_report = verify_covertness(res.final.traj, scn, mode);
  return res;
}

CovertReport verify_covertness(const Trajectory& traj, const Scenario& scn, AntennaMode mode, int samples) {
  CovertReport rep;
  rep.gamma_cap = covert_cap(scn, mode);
  for (std::size_t n = 0; n < traj.slots.size(); ++n) {
    const SlotState& s = traj.slots[n];
    for (std::size_t m = 0; m < scn.wardens.size(); ++m) {
      const auto& w = scn.wardens[m];
      std::vector<Vec2> pts;
      pts.reserve(static_cast<std::size_t>(samples) + 3);
      pts.push_back(w.est_pos);
      for (int i = 0; i < samples; ++i) {
        const double a = 2.0 * std::numbers::pi * i / samples;
        pts.push_back(w.est_pos + w.radius * Vec2(std::cos(a), std::sin(a)));
      }
      auto toward = [&](const Vec2& p, double sign) {
        const Vec2 dlt = p - w.est_pos;
        const double len = dlt.norm();
        return len > 0.0 ? Vec2(w.est_pos + sign * w.radius * dlt / len) : w.est_pos;
      };
      pts.push_back(toward(s.q_s, 1.0));   // nearest to S
      pts.push_back(toward(s.q_j, -1.0));  // farthest from J

      double worst = 0.0;
      for (const auto& p : pts) {
        const double g = mode == AntennaMode::single_antenna ? warden_sinr_single(s, p, scn)
                                                             : warden_sinr_multi(s, p, scn);
        worst = std::max(worst, g);
      }
      CovertCheck c;
      c.slot = static_cast<int>(n);
      c.warden = static_cast<int>(m);
      c.max_ratio = worst / rep.gamma_cap;
      // The detection error probability is decreasing in the SINR, so the
      // worst sample also gives the smallest DEP.
      if (mode == AntennaMode::single_antenna) {
        c.min_dep = dep_single(worst, scn.n_obs);
      } else {
        // dep_multi depends on its input only through gamma_2.
        SlotDetectionInput in;
        in.p_s = worst * scn.noise_power / scn.n_antennas;
        in.gain_sw = 1.0;
        in.noise = scn.noise_power;
        c.min_dep = dep_multi(in, scn.n_obs, scn.n_antennas);
      }
      rep.max_ratio = std::max(rep.max_ratio, c.max_ratio);
      rep.min_dep = std::min(rep.min_dep, c.min_dep);
      rep.entries.push_back(c);
    }
  }
  return rep;
}

}  // namespace covert
