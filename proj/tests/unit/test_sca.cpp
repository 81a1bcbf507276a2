#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "covert/errors.hpp"
#include "covert/optimizer.hpp"
#include "covert/sca.hpp"

using namespace covert;

namespace {

constexpr int kSamples = 100;

std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

// Expected counts for one subproblem, restated from the constraint list.
ProgramCensus expected_census(const Scenario& scn, Benchmark bench) {
  const int N = scn.n_slots;
  const int K = static_cast<int>(scn.users.size());
  const int M = static_cast<int>(scn.wardens.size());
  const bool s_moves = bench != Benchmark::b1_fixed_s;
  const bool j_moves = bench == Benchmark::proposed || bench == Benchmark::b1_fixed_s;
  ProgramCensus c;
  const int s_vars = s_moves ? 2 * (N - 2) : 0;
  const int j_vars = j_moves ? 2 * (N - 2) : (bench == Benchmark::b3_hover_j ? 2 : 0);
  c.variables = 1 + N + s_vars + j_vars + 2 * N * K + 7 * N * M;
  c.bounded_variables = N + 4 * N * M;           // p; b, c, v, theta
  c.affine_ineq = K + 2 * N * M;                 // eta rows; jamming bound; covert cap
  c.affine_eq = 0;
  c.soc = N * M + (s_moves ? N - 1 : 0) + (j_moves ? N - 1 : 0);
  c.rsoc = N * K + 2 * N * M;                    // user distance; inflation; Schur
  c.exp = N * K + 2 * N * M;                     // rate log; ln b; ln v
  return c;
}

}  // namespace

// ---- linearization property suite -------------------------------------

TEST(Linearization, RateLowerBound) {
  const double g0 = 1e12;
  for (int i = 0; i < kSamples; ++i) {
    const double p = uni(1e-6, 0.2);
    const double d_lin = uni(1e4, 1e6);
    const double truth_lin = std::log2(1.0 + g0 * p / d_lin);
    EXPECT_NEAR(rate_lower_bound(g0, p, d_lin, d_lin), truth_lin, 1e-12);
    const double d = uni(1e4, 1e6);
    EXPECT_LE(rate_lower_bound(g0, p, d, d_lin), std::log2(1.0 + g0 * p / d) + 1e-12);
  }
  EXPECT_DOUBLE_EQ(rate_lower_bound_slope(2.5e4), -1.0 / (2.5e4 * std::log(2.0)));
}

TEST(Linearization, LogPower) {
  const double rho = 1e-3;
  for (int i = 0; i < kSamples; ++i) {
    const double pl = uni(1e-6, 0.2);
    EXPECT_NEAR(log_power_linearization(rho, pl, pl), std::log(rho * pl), 1e-12);
    const double p = uni(1e-9, 0.2);
    EXPECT_GE(log_power_linearization(rho, p, pl), std::log(rho * p) - 1e-12);
  }
  EXPECT_NEAR(log_power_linearization(rho, 0.1, 0.2), std::log(rho * 0.2) - 0.5, 1e-15);
}

TEST(Linearization, Inverse) {
  for (int i = 0; i < kSamples; ++i) {
    const double cl = uni(4900, 5e5);
    EXPECT_NEAR(inverse_linearization(cl, cl), 1.0 / cl, 1e-12);
    const double c = uni(0.5 * cl, 2.0 * cl);
    EXPECT_LE(inverse_linearization(c, cl), 1.0 / c + 1e-18);
  }
  EXPECT_EQ(inverse_linearization(2.0, 1.0), 0.0);
}

TEST(Linearization, DistanceSquared) {
  for (int i = 0; i < kSamples; ++i) {
    const Vec2 w(uni(-100, 700), uni(-100, 300));
    const Vec2 ql(uni(-100, 700), uni(-100, 300));
    const Vec2 q(uni(-100, 700), uni(-100, 300));
    EXPECT_NEAR(distance_sq_linearization(ql, ql, w), (ql - w).squaredNorm(), 1e-12 * (1 + (ql - w).squaredNorm()));
    EXPECT_LE(distance_sq_linearization(q, ql, w), (q - w).squaredNorm() + 1e-9);
  }
}

TEST(Linearization, JammerInflation) {
  const Vec2 est(300, 100), qj(120, -40);
  EXPECT_DOUBLE_EQ(jammer_distance_bound(qj, est, 0.0, 70), (qj - est).squaredNorm() + 4900);
  EXPECT_DOUBLE_EQ(jammer_distance_bound(est, est, 30.0, 70), 900 + 4900);
  // Upper bound on every point of the ball.
  for (int i = 0; i < kSamples; ++i) {
    const double a = uni(0, 2 * M_PI), rad = uni(0, 30);
    const Vec2 w = est + rad * Vec2(std::cos(a), std::sin(a));
    EXPECT_GE(jammer_distance_bound(qj, est, 30, 70), (qj - w).squaredNorm() + 4900 - 1e-9);
  }
}

TEST(Linearization, SchurMatchesEigenvalues) {
  int agree = 0, decided = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(uni(-2, 2), uni(-2, 2));
    const double theta = uni(0, 3);
    const double c_lin = uni(0, 4);
    const double hs = 1.0;
    const double v = uni(0, 3);
    const double r = uni(0, 0.5);
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sprocedure_matrix(x, theta, c_lin, hs, v, r))
            .eigenvalues()
            .minCoeff();
    if (std::fabs(min_eig) < 1e-9) continue;  // on the boundary either answer is right
    ++decided;
    if ((min_eig > 0) == sprocedure_schur_holds(x, theta, c_lin, hs, v, r)) ++agree;
  }
  EXPECT_GT(decided, 900);
  EXPECT_EQ(agree, decided);
}

TEST(Linearization, SchurDirectlyAbove) {
  const double hs = 100.0;
  EXPECT_TRUE(sprocedure_schur_holds({0, 0}, 0.0, 0.0, hs, hs * hs, 30.0));
  EXPECT_FALSE(sprocedure_schur_holds({0, 0}, 0.0, 0.0, hs, hs * hs + 1e-3, 30.0));
}

// ---- subproblem assembly ----------------------------------------------

TEST(Assemble, CensusMatchesClosedForm) {
  const Scenario scn = default_scenario(ScenarioVariant::scenario1);
  for (auto bench : {Benchmark::proposed, Benchmark::b1_fixed_s, Benchmark::b2_fixed_j, Benchmark::b3_hover_j})
    for (auto mode : {AntennaMode::single_antenna, AntennaMode::multi_antenna}) {
      const Subproblem sp = assemble_subproblem(scn, initialize(scn, mode, bench), mode, bench);
      const ProgramCensus got = sp.program.census();
      const ProgramCensus want = expected_census(scn, bench);
      EXPECT_EQ(got.variables, want.variables) << to_string(bench);
      EXPECT_EQ(got.bounded_variables, want.bounded_variables) << to_string(bench);
      EXPECT_EQ(got.affine_ineq, want.affine_ineq) << to_string(bench);
      EXPECT_EQ(got.affine_eq, want.affine_eq) << to_string(bench);
      EXPECT_EQ(got.soc, want.soc) << to_string(bench);
      EXPECT_EQ(got.rsoc, want.rsoc) << to_string(bench);
      EXPECT_EQ(got.exp, want.exp) << to_string(bench);
    }
  EXPECT_EQ(expected_census(scn, Benchmark::proposed).variables, 1593);
}

TEST(Assemble, InitialIterateIsFeasible) {
  for (auto v : {ScenarioVariant::scenario1, ScenarioVariant::scenario2}) {
    const Scenario scn = default_scenario(v);
    for (auto bench : {Benchmark::proposed, Benchmark::b1_fixed_s, Benchmark::b2_fixed_j, Benchmark::b3_hover_j})
      for (auto mode : {AntennaMode::single_antenna, AntennaMode::multi_antenna}) {
        const Iterate it = initialize(scn, mode, bench);
        const Subproblem sp = assemble_subproblem(scn, it, mode, bench);
        const Violation viol = sp.program.max_violation(sp.point_for(it.traj, scn));
        EXPECT_LE(viol.amount, 1e-9) << to_string(bench) << " " << to_string(mode) << " at " << viol.where;
        // Surrogate at the iterate equals the true objective.
        for (const auto& e : sp.layout.avg_rate_bound)
          EXPECT_GE(e.eval(sp.point_for(it.traj, scn)), it.objective - 1e-9);
      }
  }
}

TEST(Assemble, SingleAntennaCollapse) {
  Scenario scn = default_scenario(ScenarioVariant::scenario1);
  scn.n_slots = 6;
  scn.slot_seconds = 100.0 / 6;
  scn.n_antennas = 1;
  const Iterate it = initialize(scn, AntennaMode::single_antenna, Benchmark::proposed);
  std::istringstream la(assemble_subproblem(scn, it, AntennaMode::single_antenna, Benchmark::proposed).program.dump());
  std::istringstream lb(assemble_subproblem(scn, it, AntennaMode::multi_antenna, Benchmark::proposed).program.dump());
  std::string x, y;
  int differing = 0, lines = 0;
  while (std::getline(la, x) && std::getline(lb, y)) {
    ++lines;
    if (x != y) {
      ++differing;
      EXPECT_NE(x.find("[cap["), std::string::npos) << x;
    }
  }
  EXPECT_GT(lines, 100);
  EXPECT_EQ(differing, static_cast<int>(scn.n_slots * scn.wardens.size()));
}

TEST(Assemble, FixedSBenchmarkKeepsPositions) {
  const Scenario scn = default_scenario(ScenarioVariant::scenario1);
  const Iterate it = initialize(scn, AntennaMode::single_antenna, Benchmark::b1_fixed_s);
  const Subproblem sp = assemble_subproblem(scn, it, AntennaMode::single_antenna, Benchmark::b1_fixed_s);
  const SolveOutcome out = solve(sp.program);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  const Trajectory t = sp.trajectory(out.values, scn);
  for (int n = 0; n < scn.n_slots; ++n) {
    EXPECT_EQ(t.slots[n].q_s, it.traj.slots[n].q_s) << n;
  }
  EXPECT_NO_THROW(validate_trajectory(t, scn, false, 1e-6));
}

TEST(Assemble, HoverBenchmarkSharesPosition) {
  const Scenario scn = default_scenario(ScenarioVariant::scenario1);
  const Iterate it = initialize(scn, AntennaMode::single_antenna, Benchmark::b3_hover_j);
  const Subproblem sp = assemble_subproblem(scn, it, AntennaMode::single_antenna, Benchmark::b3_hover_j);
  const SolveOutcome out = solve(sp.program);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  const Trajectory t = sp.trajectory(out.values, scn);
  for (const auto& s : t.slots) EXPECT_EQ(s.q_j, t.slots.front().q_j);
  EXPECT_NO_THROW(validate_trajectory(t, scn, true, 1e-6));
}

TEST(Assemble, InflationTightAtOptimum) {
  const Scenario scn = default_scenario(ScenarioVariant::scenario1);
  const Iterate it = initialize(scn, AntennaMode::single_antenna, Benchmark::proposed);
  const Subproblem sp = assemble_subproblem(scn, it, AntennaMode::single_antenna, Benchmark::proposed);
  const SolveOutcome out = solve(sp.program);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  const Trajectory t = sp.trajectory(out.values, scn);
  // c only enters through the jamming bound, which prefers it small.
  int tight = 0;
  for (int n = 0; n < scn.n_slots; ++n)
    for (std::size_t m = 0; m < scn.wardens.size(); ++m) {
      const double c = out.values[sp.layout.c[n][m]] * 1e4;
      const double bound = jammer_distance_bound(t.slots[n].q_j, scn.wardens[m].est_pos, scn.wardens[m].radius, scn.j_alt);
      EXPECT_GE(c, bound * (1 - 1e-6));
      if (c <= bound * (1 + 1e-4)) ++tight;
    }
  EXPECT_GT(tight, scn.n_slots);
}

TEST(Assemble, Errors) {
  const Scenario scn = default_scenario(ScenarioVariant::scenario1);
  Iterate it = initialize(scn, AntennaMode::single_antenna, Benchmark::proposed);
  EXPECT_THROW(assemble_subproblem(scn, it, AntennaMode::single_antenna, Benchmark::b3_hover_j), ModeError);
  Iterate bad = it;
  bad.traj.slots[4].p_s = 0.0;
  EXPECT_THROW(assemble_subproblem(scn, bad, AntennaMode::single_antenna, Benchmark::proposed), LinearizationError);
  bad = it;
  bad.d_prev(2, 1) = 0.0;
  EXPECT_THROW(assemble_subproblem(scn, bad, AntennaMode::single_antenna, Benchmark::proposed), LinearizationError);
  bad = it;
  bad.c_prev(2, 1) = -1.0;
  EXPECT_THROW(assemble_subproblem(scn, bad, AntennaMode::single_antenna, Benchmark::proposed), LinearizationError);
  bad = it;
  bad.traj.slots.pop_back();
  EXPECT_THROW(assemble_subproblem(scn, bad, AntennaMode::single_antenna, Benchmark::proposed), ModeError);
}

TEST(Names, RoundTrip) {
  for (auto b : {Benchmark::proposed, Benchmark::b1_fixed_s, Benchmark::b2_fixed_j, Benchmark::b3_hover_j})
    EXPECT_EQ(parse_benchmark(to_string(b)), b);
  for (auto m : {AntennaMode::single_antenna, AntennaMode::multi_antenna}) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_THROW(parse_benchmark("b4"), ValidationError);
  EXPECT_THROW(parse_mode("dual"), ValidationError);
}
