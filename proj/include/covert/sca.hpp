#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "covert/channel.hpp"
#include "covert/conic.hpp"
#include "covert/scenario.hpp"

namespace covert {

enum class AntennaMode { single_antenna, multi_antenna };
enum class Benchmark { proposed, b1_fixed_s, b2_fixed_j, b3_hover_j };

const char* to_string(AntennaMode m);
const char* to_string(Benchmark b);
AntennaMode parse_mode(const std::string& s);
Benchmark parse_benchmark(const std::string& s);

/// Linearization point of one SCA iteration. d_prev is (slot x user) in m^2,
/// c_prev is (slot x warden) in m^2.
struct Iterate {
  Trajectory traj;
  Eigen::MatrixXd d_prev;
  Eigen::MatrixXd c_prev;
  double objective = 0.0;
};

/// Covertness SINR cap for the mode: gamma_max,1 or gamma_max,2.
double covert_cap(const Scenario& scn, AntennaMode mode);

/// ||q_s - u||^2 + H_S^2 for every (slot, user).
Eigen::MatrixXd user_distance_sq(const Trajectory& traj, const Scenario& scn);
/// Worst-case jammer distance (||q_j - q_hat|| + r)^2 + H_J^2 for every (slot, warden).
Eigen::MatrixXd jammer_distance_bound(const Trajectory& traj, const Scenario& scn);
/// Iterate whose slacks are tight for `traj`.
Iterate make_iterate(const Trajectory& traj, const Scenario& scn);

// Scalar surrogates in SI units. The subproblem builder emits the same
// expressions in scaled units.

/// log2(g0 P + d) - log2(d_l) - (d - d_l) / (d_l ln 2); lower bound on log2(1 + g0 P / d).
double rate_lower_bound(double gamma0, double p_s, double d, double d_lin);
/// d/dd of the affine part of rate_lower_bound.
double rate_lower_bound_slope(double d_lin);
/// ln(rho0 P_l) + (P - P_l)/P_l; upper bound on ln(rho0 P).
double log_power_linearization(double ref_gain, double p_s, double p_lin);
/// 1/c_l - (c - c_l)/c_l^2; lower bound on 1/c.
double inverse_linearization(double c, double c_lin);
/// ||q_l - w||^2 + 2 (q_l - w)'(q - q_l); lower bound on ||q - w||^2.
double distance_sq_linearization(const Vec2& q, const Vec2& q_lin, const Vec2& center);
/// (||q_j - w|| + r)^2 + H_J^2.
double jammer_distance_bound(const Vec2& q_j, const Vec2& est, double radius, double j_alt);

/// The 3x3 robustness matrix [(1+t) I, -x; -x', C + H_S^2 - v - t r^2].
Eigen::Matrix3d sprocedure_matrix(const Vec2& x, double theta, double c_lin, double s_alt, double v,
                                  double radius);
/// Rotated-cone form of the same condition: theta >= 0 and
/// ||x||^2 <= (1+theta) (C + H_S^2 - v - theta r^2) with the second factor >= 0.
bool sprocedure_schur_holds(const Vec2& x, double theta, double c_lin, double s_alt, double v,
                            double radius, double tol = 0.0);

/// Scale factors between SI quantities and the subproblem's variables.
struct Scaling {
  double length = 100.0;  // meters per unit
  double p_scale = 1.0;   // watts per unit of the power variable
  double p_ref = 1.0;     // watts; jammer-term reference
  double alpha = 1.0;     // gamma0 p_scale / length^2
  double beta = 1.0;      // gamma0 p_ref / length^2
  double kfac = 1.0;      // 1 or K
};

/// Variable ids of one assembled subproblem; -1 where the quantity is a
/// constant (endpoint or frozen by the benchmark).
struct SubproblemLayout {
  int eta = -1;
  std::vector<int> p;                      // [n]
  std::vector<std::array<int, 2>> q_s;     // [n]
  std::vector<std::array<int, 2>> q_j;     // [n]
  std::vector<std::vector<int>> d, r;      // [n][k]
  std::vector<std::vector<int>> b, c, v, theta, tj, lb, lv;  // [n][m]

  // Scaled positions of each slot (variables or constants).
  std::vector<std::array<LinExpr, 2>> q_s_expr, q_j_expr;
  // Physical positions of the constant slots, reported back unscaled.
  std::vector<std::optional<Vec2>> q_s_fixed, q_j_fixed;
  // Right-hand side of eta <= (1/N) sum_n R^L_k(n), per user.
  std::vector<LinExpr> avg_rate_bound;
  // Right-hand side of the linearized jamming-power bound on b, per (n, m).
  std::vector<std::vector<LinExpr>> b_bound;
};

struct Subproblem {
  ConvexProgram program;
  SubproblemLayout layout;
  Scaling scaling;
  AntennaMode mode = AntennaMode::single_antenna;
  Benchmark bench = Benchmark::proposed;
  double gamma_cap = 0.0;

  /// Trajectory encoded by a solution vector, powers clipped to [0, P_max].
  Trajectory trajectory(const std::vector<double>& values, const Scenario& scn) const;
  /// Variable vector representing `traj` with every slack set tight. When
  /// `traj` is the linearization trajectory this is the incumbent point.
  std::vector<double> point_for(const Trajectory& traj, const Scenario& scn) const;
};

/// Throws LinearizationError for nonpositive linearization points and
/// ModeError when the iterate does not fit the benchmark.
Subproblem assemble_subproblem(const Scenario& scn, const Iterate& it, AntennaMode mode,
                               Benchmark bench);

}  // namespace covert
