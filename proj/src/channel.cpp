#include "covert/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "covert/errors.hpp"

namespace covert {

double gain_sq(const Vec2& q_tx, double alt, const Vec2& q_rx, double ref_gain) {
  const double dist_sq = (q_tx - q_rx).squaredNorm() + alt * alt;
  if (!(dist_sq > 0.0)) throw DegenerateGeometry("transmitter and receiver coincide");
  return ref_gain / dist_sq;
}

double user_rate(const SlotState& state, const Vec2& user, const Scenario& scn) {
  const double snr = state.p_s / scn.noise_power * gain_sq(state.q_s, scn.s_alt, user, scn.ref_gain);
  return std::log2(1.0 + snr);
}

double avg_rate(const Trajectory& traj, const Vec2& user, const Scenario& scn) {
  if (traj.slots.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : traj.slots) sum += user_rate(s, user, scn);
  return sum / static_cast<double>(traj.slots.size());
}

double min_avg_rate(const Trajectory& traj, const Scenario& scn) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : scn.users) best = std::min(best, avg_rate(traj, u, scn));
  return best;
}

double warden_sinr_single(const SlotState& state, const Vec2& warden_pos, const Scenario& scn) {
  const double g_sw = gain_sq(state.q_s, scn.s_alt, warden_pos, scn.ref_gain);
  const double g_jw = gain_sq(state.q_j, scn.j_alt, warden_pos, scn.ref_gain);
  return state.p_s * g_sw / (scn.p_jam * g_jw + scn.noise_power);
}

double warden_sinr_multi(const SlotState& state, const Vec2& warden_pos, const Scenario& scn) {
  const double k = scn.n_antennas;
  const double g_sw = gain_sq(state.q_s, scn.s_alt, warden_pos, scn.ref_gain);
  const double g_jw = gain_sq(state.q_j, scn.j_alt, warden_pos, scn.ref_gain);
  return state.p_s * k * g_sw / (scn.noise_power + scn.p_jam * k * g_jw);
}

void validate_trajectory(const Trajectory& traj, const Scenario& scn, bool b3_hover, double tol) {
  const auto& s = traj.slots;
  if (static_cast<int>(s.size()) != scn.n_slots)
    throw ValidationError(fmt::format("trajectory has {} slots, scenario {}", s.size(), scn.n_slots));
  auto check_end = [&](const Vec2& got, const Vec2& want, const char* what) {
    if ((got - want).norm() > tol)
      throw ValidationError(fmt::format("{} off by {:.3e} m", what, (got - want).norm()));
  };
  check_end(s.front().q_s, scn.s_start, "S start");
  check_end(s.back().q_s, scn.s_end, "S end");
  if (!b3_hover) {
    check_end(s.front().q_j, scn.j_start, "J start");
    check_end(s.back().q_j, scn.j_end, "J end");
  }
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (!(s[n].p_s >= -tol && s[n].p_s <= scn.p_max + tol))
      throw ValidationError(fmt::format("slot {}: power {} outside [0, {}]", n, s[n].p_s, scn.p_max));
    if (n == 0) continue;
    const double step_s = (s[n].q_s - s[n - 1].q_s).norm();
    const double step_j = (s[n].q_j - s[n - 1].q_j).norm();
    if (step_s > scn.max_step_s() + tol)
      throw ValidationError(fmt::format("slot {}: S moves {:.9f} m > {:.9f} m", n, step_s, scn.max_step_s()));
    if (b3_hover ? step_j > tol : step_j > scn.max_step_j() + tol)
      throw ValidationError(fmt::format("slot {}: J moves {:.9f} m", n, step_j));
  }
}

std::vector<Vec2> straight_line(const Vec2& from, const Vec2& to, int n) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    pts[i] = from + t * (to - from);
  }
  if (n > 1) pts.back() = to;
  return pts;
}

}  // namespace covert
