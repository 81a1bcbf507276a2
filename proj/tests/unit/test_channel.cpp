#include <cmath>

#include <gtest/gtest.h>

#include "covert/channel.hpp"
#include "covert/errors.hpp"

using namespace covert;

namespace {

Scenario scenario_one() { return default_scenario(ScenarioVariant::scenario1); }

}  // namespace

TEST(Gain, Arithmetic) {
  EXPECT_NEAR(gain_sq({0, 0}, 100, {0, 0}, 1e-3), 1e-7, 1e-20);
  EXPECT_NEAR(gain_sq({0, 0}, 100, {100, 200}, 1e-3), 1e-3 / 6e4, 1e-20);
  const double g = gain_sq({10, -20}, 50, {70, 30}, 1e-3);
  EXPECT_NEAR(gain_sq({20, -40}, 100, {140, 60}, 1e-3), g / 4.0, 1e-22);
  EXPECT_THROW(gain_sq({1, 1}, 0.0, {1, 1}, 1e-3), DegenerateGeometry);
}

TEST(Rate, Values) {
  const Scenario scn = scenario_one();
  SlotState s{{0, 0}, {0, 0}, 0.0};
  EXPECT_EQ(user_rate(s, {100, 200}, scn), 0.0);
  s.p_s = 0.2;
  // log2(1 + 0.2 * (1e-3 / 6e4) / 1e-15)
  EXPECT_NEAR(user_rate(s, {100, 200}, scn), std::log2(1.0 + 0.2 * 1e-3 / 6e4 / 1e-15), 1e-12);
  EXPECT_NEAR(user_rate(s, {100, 200}, scn), 21.669, 1e-3);
  double prev = user_rate(s, {0, 0}, scn);
  for (double x = 10; x < 1000; x += 10) {
    const double r = user_rate(s, {x, 0}, scn);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Rate, ConcaveInPower) {
  const Scenario scn = scenario_one();
  const double h = 1e-4;
  for (double p = 2e-4; p < 0.2; p *= 1.7) {
    auto r = [&](double pp) { return user_rate({{50, 80}, {0, 0}, pp}, {100, 200}, scn); };
    EXPECT_LE(r(p + h) - 2.0 * r(p) + r(p - h), 1e-12);
  }
}

TEST(MinAvgRate, BruteForceSummation) {
  const Scenario scn = scenario_one();
  const auto qs = straight_line(scn.s_start, scn.s_end, scn.n_slots);
  const auto qj = straight_line(scn.j_start, scn.j_end, scn.n_slots);
  Trajectory traj;
  for (int n = 0; n < scn.n_slots; ++n) traj.slots.push_back({qs[n], qj[n], 0.01});

  double best = INFINITY;
  for (const auto& u : scn.users) {
    double sum = 0.0;
    for (int n = 0; n < scn.n_slots; ++n) {
      const double dx = qs[n].x() - u.x(), dy = qs[n].y() - u.y();
      const double snr = 0.01 * 1e-3 / (dx * dx + dy * dy + 100.0 * 100.0) / 1e-15;
      sum += std::log2(1.0 + snr);
    }
    best = std::min(best, sum / scn.n_slots);
  }
  EXPECT_NEAR(min_avg_rate(traj, scn), best, 1e-12);

  for (auto& s : traj.slots) s.p_s = 0.0;
  EXPECT_EQ(min_avg_rate(traj, scn), 0.0);
}

TEST(MinAvgRate, SingleSlotSingleUser) {
  Scenario scn = scenario_one();
  scn.users = {{100, 200}};
  Trajectory traj{{{{30, 40}, {0, 0}, 0.05}}};
  EXPECT_DOUBLE_EQ(min_avg_rate(traj, scn), user_rate(traj.slots[0], scn.users[0], scn));
}

TEST(WardenSinr, Values) {
  const Scenario scn = scenario_one();
  SlotState s{{300, 100}, {300, 50}, 0.0};
  EXPECT_EQ(warden_sinr_single(s, {300, 0}, scn), 0.0);
  s.p_s = 0.01;
  const double gs = 1e-3 / (100.0 * 100.0 + 100.0 * 100.0);
  const double gj = 1e-3 / (50.0 * 50.0 + 70.0 * 70.0);
  EXPECT_NEAR(warden_sinr_single(s, {300, 0}, scn) / (0.01 * gs / (0.1 * gj + 1e-15)), 1.0, 1e-13);
  EXPECT_NEAR(warden_sinr_multi(s, {300, 0}, scn) / (0.01 * 6 * gs / (1e-15 + 0.1 * 6 * gj)), 1.0, 1e-13);

  Scenario loud = scn;
  loud.p_jam = 1e12;
  EXPECT_LT(warden_sinr_single(s, {300, 0}, loud), 1e-12);
}

TEST(WardenSinr, MultiAntennaLimits) {
  Scenario scn = scenario_one();
  const SlotState s{{120, 40}, {200, -30}, 0.03};
  scn.n_antennas = 1;
  EXPECT_NEAR(warden_sinr_multi(s, {100, 0}, scn), warden_sinr_single(s, {100, 0}, scn), 1e-15);
  // Noise negligible against jamming: K cancels.
  scn.noise_power = 1e-30;
  scn.n_antennas = 4;
  const double k4 = warden_sinr_multi(s, {100, 0}, scn);
  scn.n_antennas = 1;
  EXPECT_NEAR(k4 / warden_sinr_multi(s, {100, 0}, scn), 1.0, 1e-12);
}

TEST(WardenSinr, GainScaleInvariantWithoutNoise) {
  Scenario scn = scenario_one();
  scn.noise_power = 0.0;
  const SlotState s{{120, 40}, {200, -30}, 0.03};
  const double a = warden_sinr_single(s, {100, 0}, scn);
  scn.ref_gain *= 37.0;
  EXPECT_NEAR(warden_sinr_single(s, {100, 0}, scn) / a, 1.0, 1e-14);
}

TEST(Trajectory, Validation) {
  const Scenario scn = scenario_one();
  const auto qs = straight_line(scn.s_start, scn.s_end, scn.n_slots);
  const auto qj = straight_line(scn.j_start, scn.j_end, scn.n_slots);
  EXPECT_NEAR((qs[1] - qs[0]).norm(), 800.0 / 49.0, 1e-12);
  Trajectory traj;
  for (int n = 0; n < scn.n_slots; ++n) traj.slots.push_back({qs[n], qj[n], 0.1});
  EXPECT_NO_THROW(validate_trajectory(traj, scn));

  Trajectory bad = traj;
  bad.slots[0].q_s.x() += 1.0;
  EXPECT_THROW(validate_trajectory(bad, scn), ValidationError);
  bad = traj;
  bad.slots[3].p_s = 0.3;
  EXPECT_THROW(validate_trajectory(bad, scn), ValidationError);
  bad = traj;
  bad.slots.pop_back();
  EXPECT_THROW(validate_trajectory(bad, scn), ValidationError);

  // A step of exactly V*delta passes; 1e-8 m more fails.
  Scenario two = scn;
  two.n_slots = 2;
  two.s_start = {0, 0};
  two.s_end = {40, 0};
  two.j_start = two.j_end = {0, 0};
  Trajectory t2{{{{0, 0}, {0, 0}, 0}, {{40, 0}, {0, 0}, 0}}};
  EXPECT_NO_THROW(validate_trajectory(t2, two));
  two.s_end = {40 + 1e-8, 0};
  t2.slots[1].q_s = two.s_end;
  EXPECT_THROW(validate_trajectory(t2, two), ValidationError);
}
