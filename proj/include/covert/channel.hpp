#pragma once

#include <vector>

#include "covert/scenario.hpp"

namespace covert {

struct SlotState {
  Vec2 q_s = Vec2::Zero();
  Vec2 q_j = Vec2::Zero();
  double p_s = 0.0;

  bool operator==(const SlotState&) const = default;
};

struct Trajectory {
  std::vector<SlotState> slots;

  bool operator==(const Trajectory&) const = default;
};

/// |h|^2 = rho0 / (||q_tx - q_rx||^2 + alt^2).
double gain_sq(const Vec2& q_tx, double alt, const Vec2& q_rx, double ref_gain);

double user_rate(const SlotState& state, const Vec2& user, const Scenario& scn);
double avg_rate(const Trajectory& traj, const Vec2& user, const Scenario& scn);
double min_avg_rate(const Trajectory& traj, const Scenario& scn);

double warden_sinr_single(const SlotState& state, const Vec2& warden_pos, const Scenario& scn);
double warden_sinr_multi(const SlotState& state, const Vec2& warden_pos, const Scenario& scn);

/// Checks slot count, endpoints, per-slot displacement and power box. `b3_hover`
/// skips J's endpoint checks and instead requires J to stay put.
void validate_trajectory(const Trajectory& traj, const Scenario& scn, bool b3_hover = false,
                         double tol = 1e-9);

/// Constant-speed line from `from` to `to` with `n` samples.
std::vector<Vec2> straight_line(const Vec2& from, const Vec2& to, int n);

}  // namespace covert
