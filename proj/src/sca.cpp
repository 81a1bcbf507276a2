#include "covert/sca.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "covert/detection.hpp"
#include "covert/errors.hpp"

namespace covert {

const char* to_string(AntennaMode m) {
  return m == AntennaMode::single_antenna ? "single" : "multi";
}

const char* to_string(Benchmark b) {
  switch (b) {
    case Benchmark::proposed: return "proposed";
    case Benchmark::b1_fixed_s: return "b1";
    case Benchmark::b2_fixed_j: return "b2";
    case Benchmark::b3_hover_j: return "b3";
  }
  return "unknown";
}

AntennaMode parse_mode(const std::string& s) {
  if (s == "single") return AntennaMode::single_antenna;
  if (s == "multi") return AntennaMode::multi_antenna;
  throw ValidationError(fmt::format("unknown mode '{}' (single|multi)", s));
}

Benchmark parse_benchmark(const std::string& s) {
  if (s == "proposed") return Benchmark::proposed;
  if (s == "b1") return Benchmark::b1_fixed_s;
  if (s == "b2") return Benchmark::b2_fixed_j;
  if (s == "b3") return Benchmark::b3_hover_j;
  throw ValidationError(fmt::format("unknown benchmark '{}' (proposed|b1|b2|b3)", s));
}

double covert_cap(const Scenario& scn, AntennaMode mode) {
  return mode == AntennaMode::single_antenna ? gamma_cap_single(scn.epsilon, scn.n_obs)
                                             : gamma_cap_multi(scn.epsilon, scn.n_obs);
}

Eigen::MatrixXd user_distance_sq(const Trajectory& traj, const Scenario& scn) {
  const auto n = static_cast<Eigen::Index>(traj.slots.size());
  Eigen::MatrixXd d(n, static_cast<Eigen::Index>(scn.users.size()));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d.cols(); ++k)
      d(i, k) = (traj.slots[static_cast<std::size_t>(i)].q_s - scn.users[static_cast<std::size_t>(k)])
                    .squaredNorm() + scn.s_alt * scn.s_alt;
  return d;
}

Eigen::MatrixXd jammer_distance_bound(const Trajectory& traj, const Scenario& scn) {
  const auto n = static_cast<Eigen::Index>(traj.slots.size());
  Eigen::MatrixXd c(n, static_cast<Eigen::Index>(scn.wardens.size()));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index m = 0; m < c.cols(); ++m) {
      const auto& w = scn.wardens[static_cast<std::size_t>(m)];
      c(i, m) = jammer_distance_bound(traj.slots[static_cast<std::size_t>(i)].q_j, w.est_pos, w.radius,
                                      scn.j_alt);
    }
  return c;
}

Iterate make_iterate(const Trajectory& traj, const Scenario& scn) {
  Iterate it;
  it.traj = traj;
  it.d_prev = user_distance_sq(traj, scn);
  it.c_prev = jammer_distance_bound(traj, scn);
  it.objective = min_avg_rate(traj, scn);
  return it;
}

double rate_lower_bound(double gamma0, double p_s, double d, double d_lin) {
  if (!(d_lin > 0.0)) throw LinearizationError("distance linearization point must be positive");
  return std::log2(gamma0 * p_s + d) - std::log2(d_lin) - (d - d_lin) / (d_lin * std::log(2.0));
}

double rate_lower_bound_slope(double d_lin) { return -1.0 / (d_lin * std::log(2.0)); }

double log_power_linearization(double ref_gain, double p_s, double p_lin) {
  if (!(p_lin > 0.0)) throw LinearizationError("power linearization point must be positive");
  return std::log(ref_gain * p_lin) + (p_s - p_lin) / p_lin;
}

double inverse_linearization(double c, double c_lin) {
  if (!(c_lin > 0.0)) throw LinearizationError("jammer-distance linearization point must be positive");
  return 1.0 / c_lin - (c - c_lin) / (c_lin * c_lin);
}

double distance_sq_linearization(const Vec2& q, const Vec2& q_lin, const Vec2& center) {
  const Vec2 g = q_lin - center;
  return g.squaredNorm() + 2.0 * g.dot(q - q_lin);
}

double jammer_distance_bound(const Vec2& q_j, const Vec2& est, double radius, double j_alt) {
  const double t = (q_j - est).norm() + radius;
  return t * t + j_alt * j_alt;
}

Eigen::Matrix3d sprocedure_matrix(const Vec2& x, double theta, double c_lin, double s_alt, double v,
                                  double radius) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = m(1, 1) = 1.0 + theta;
  m(0, 2) = m(2, 0) = -x.x();
  m(1, 2) = m(2, 1) = -x.y();
  m(2, 2) = c_lin + s_alt * s_alt - v - theta * radius * radius;
  return m;
}

bool sprocedure_schur_holds(const Vec2& x, double theta, double c_lin, double s_alt, double v,
                            double radius, double tol) {
  const double second = c_lin + s_alt * s_alt - v - theta * radius * radius;
  return theta >= -tol && second >= -tol && x.squaredNorm() <= (1.0 + theta) * second + tol;
}

namespace {

constexpr double kLength = 100.0;
constexpr double kVFloor = 1e-6;

class Builder {
 public:
  Builder(const Scenario& scn, const Iterate& it, AntennaMode mode, Benchmark bench)
      : scn_(scn), it_(it), sp_{}, P_(sp_.program), L_(sp_.layout) {
    sp_.mode = mode;
    sp_.bench = bench;
    N_ = scn.n_slots;
    K_ = static_cast<int>(scn.users.size());
    M_ = static_cast<int>(scn.wardens.size());
    check_iterate();

    Scaling& s = sp_.scaling;
    s.length = kLength;
    s.p_scale = scn.p_max > 0.0 ? scn.p_max : 1.0;
    s.p_ref = scn.p_jam > 0.0 ? scn.p_jam : s.p_scale;
    s.alpha = scn.gamma0() * s.p_scale / (kLength * kLength);
    s.beta = scn.gamma0() * s.p_ref / (kLength * kLength);
    s.kfac = mode == AntennaMode::multi_antenna ? scn.n_antennas : 1.0;
    sp_.gamma_cap = covert_cap(scn, mode);
  }

  Subproblem build() {
    declare_trajectory();
    for (int n = 0; n < N_; ++n)
      for (int k = 0; k < K_; ++k) rate_lower_bound(n, k);
    for (int k = 0; k < K_; ++k) {
      L_.avg_rate_bound[k] *= 1.0 / N_;
      P_.add_affine(P_.var(L_.eta), Sense::le, L_.avg_rate_bound[k], fmt::format("eta<=avg_rate[k={}]", k));
    }
    for (int n = 0; n < N_; ++n)
      for (int m = 0; m < M_; ++m) {
        jammer_distance_inflation(n, m);
        const LinExpr b_rhs = linearize_inverse(n, m);
        P_.add_affine(P_.var(L_.b[n][m]), Sense::le, b_rhs, fmt::format("b<=jam[n={},m={}]", n, m));
        L_.b_bound[n][m] = b_rhs;
        sprocedure_schur(n, m);
        covert_cap_constraint(n, m);
      }
    velocity_constraints();
    P_.maximize(P_.var(L_.eta));
    return std::move(sp_);
  }

 private:
  bool s_frozen() const { return sp_.bench == Benchmark::b1_fixed_s; }
  bool j_frozen() const { return sp_.bench == Benchmark::b2_fixed_j; }
  bool j_hover() const { return sp_.bench == Benchmark::b3_hover_j; }

  void check_iterate() const {
    const auto& slots = it_.traj.slots;
    if (static_cast<int>(slots.size()) != N_)
      throw ModeError(fmt::format("iterate has {} slots, scenario {}", slots.size(), N_));
    if (it_.d_prev.rows() != N_ || it_.d_prev.cols() != K_ || it_.c_prev.rows() != N_ ||
        it_.c_prev.cols() != M_)
      throw ModeError("iterate slack tables do not match the scenario dimensions");
    if (j_hover())
      for (const auto& s : slots)
        if ((s.q_j - slots.front().q_j).norm() > 1e-9)
          throw ModeError("hover benchmark needs a stationary jammer in the iterate");
    for (int n = 0; n < N_; ++n) {
      if (!(slots[n].p_s > 0.0))
        throw LinearizationError(fmt::format("slot {}: power linearization point must be positive", n));
      for (int k = 0; k < K_; ++k)
        if (!(it_.d_prev(n, k) > 0.0) || !std::isfinite(it_.d_prev(n, k)))
          throw LinearizationError(fmt::format("d_prev({},{}) must be positive", n, k));
      for (int m = 0; m < M_; ++m)
        if (!(it_.c_prev(n, m) > 0.0) || !std::isfinite(it_.c_prev(n, m)))
          throw LinearizationError(fmt::format("c_prev({},{}) must be positive", n, m));
    }
  }

  std::array<LinExpr, 2> constant(const Vec2& q) const {
    return {LinExpr(q.x() / kLength), LinExpr(q.y() / kLength)};
  }

  std::array<LinExpr, 2> new_point(const char* who, int n, std::array<int, 2>& ids) {
    ids[0] = P_.add_variable(fmt::format("{}x[{}]", who, n));
    ids[1] = P_.add_variable(fmt::format("{}y[{}]", who, n));
    return {P_.var(ids[0]), P_.var(ids[1])};
  }

  void declare_trajectory() {
    L_.eta = P_.add_variable("eta");
    L_.p.assign(N_, -1);
    L_.q_s.assign(N_, {-1, -1});
    L_.q_j.assign(N_, {-1, -1});
    L_.q_s_expr.resize(N_);
    L_.q_j_expr.resize(N_);
    L_.q_s_fixed.assign(N_, std::nullopt);
    L_.q_j_fixed.assign(N_, std::nullopt);
    std::array<int, 2> hover_ids{-1, -1};
    std::array<LinExpr, 2> hover;
    for (int n = 0; n < N_; ++n) {
      const auto& slot = it_.traj.slots[n];
      L_.p[n] = P_.add_variable(fmt::format("p[{}]", n), 0.0, scn_.p_max / sp_.scaling.p_scale);

      const bool s_end = n == 0 || n == N_ - 1;
      if (s_frozen() || s_end) {
        L_.q_s_fixed[n] = s_frozen() ? slot.q_s : (n == 0 ? scn_.s_start : scn_.s_end);
        L_.q_s_expr[n] = constant(*L_.q_s_fixed[n]);
      } else {
        L_.q_s_expr[n] = new_point("qs", n, L_.q_s[n]);
      }

      if (j_frozen()) {
        L_.q_j_fixed[n] = slot.q_j;
        L_.q_j_expr[n] = constant(slot.q_j);
      } else if (j_hover()) {
        if (n == 0) hover = new_point("qh", 0, hover_ids);
        L_.q_j[n] = hover_ids;
        L_.q_j_expr[n] = hover;
      } else if (s_end) {
        L_.q_j_fixed[n] = n == 0 ? scn_.j_start : scn_.j_end;
        L_.q_j_expr[n] = constant(*L_.q_j_fixed[n]);
      } else {
        L_.q_j_expr[n] = new_point("qj", n, L_.q_j[n]);
      }
    }

    auto grid = [&](int cols) { return std::vector<std::vector<int>>(N_, std::vector<int>(cols, -1)); };
    L_.d = grid(K_);
    L_.r = grid(K_);
    for (int n = 0; n < N_; ++n)
      for (int k = 0; k < K_; ++k) {
        L_.d[n][k] = P_.add_variable(fmt::format("d[{},{}]", n, k));
        L_.r[n][k] = P_.add_variable(fmt::format("r[{},{}]", n, k));
      }
    for (auto* g : {&L_.b, &L_.c, &L_.v, &L_.theta, &L_.tj, &L_.lb, &L_.lv}) *g = grid(M_);
    const double hj = scn_.j_alt / kLength;
    for (int n = 0; n < N_; ++n)
      for (int m = 0; m < M_; ++m) {
        const auto tag = fmt::format("[{},{}]", n, m);
        L_.b[n][m] = P_.add_variable("b" + tag, 1.0 / (2.0 * sp_.scaling.kfac * sp_.scaling.beta));
        L_.c[n][m] = P_.add_variable("c" + tag, hj * hj);
        L_.v[n][m] = P_.add_variable("v" + tag, kVFloor);
        L_.theta[n][m] = P_.add_variable("theta" + tag, 0.0);
        L_.tj[n][m] = P_.add_variable("tj" + tag);
        L_.lb[n][m] = P_.add_variable("lb" + tag);
        L_.lv[n][m] = P_.add_variable("lv" + tag);
      }
    L_.avg_rate_bound.assign(K_, LinExpr());
    L_.b_bound.assign(N_, std::vector<LinExpr>(M_));
  }

  std::array<LinExpr, 2> offset(const std::array<LinExpr, 2>& q, const Vec2& p) const {
    return {q[0] - p.x() / kLength, q[1] - p.y() / kLength};
  }

  // R^L_k(n) in bits:
  //   (r + ln alpha)/ln2 - log2(d_l) - (d - d_l)/(d_l ln2),   r <= ln(P + d/alpha)
  //   d >= ||q_s - u||^2 + H_S^2.
  void rate_lower_bound(int n, int k) {
    const double l2 = kLength * kLength;
    const double d_lin = it_.d_prev(n, k) / l2;
    const double hs = scn_.s_alt / kLength;
    const int d = L_.d[n][k];
    const int r = L_.r[n][k];
    const auto x = offset(L_.q_s_expr[n], scn_.users[k]);
    P_.add_rsoc({x[0], x[1], LinExpr(hs)}, 0.5 * P_.var(d), 1.0, fmt::format("d>=dist[n={},k={}]", n, k));
    P_.add_log_epigraph(P_.var(r), P_.var(L_.p[n]) + (1.0 / sp_.scaling.alpha) * P_.var(d),
                        fmt::format("r<=ln[n={},k={}]", n, k));
    const double ln2 = std::log(2.0);
    LinExpr bound = (1.0 / ln2) * P_.var(r) + std::log(sp_.scaling.alpha) / ln2 - std::log2(d_lin) -
                    (1.0 / (d_lin * ln2)) * (P_.var(d) - d_lin);
    L_.avg_rate_bound[k] += bound;
  }

  // tj >= ||q_j - q_hat||,  c >= (tj + r)^2 + H_J^2.
  void jammer_distance_inflation(int n, int m) {
    const auto& w = scn_.wardens[m];
    const auto x = offset(L_.q_j_expr[n], w.est_pos);
    const auto tag = fmt::format("[n={},m={}]", n, m);
    P_.add_soc({x[0], x[1]}, P_.var(L_.tj[n][m]), "tj>=dist" + tag);
    P_.add_rsoc({P_.var(L_.tj[n][m]) + w.radius / kLength, LinExpr(scn_.j_alt / kLength)},
                0.5 * P_.var(L_.c[n][m]), 1.0, "c>=inflated" + tag);
  }

  // (P_J/P_ref) B(c) + 1/(kfac beta), B the tangent of 1/c at c_l.
  LinExpr linearize_inverse(int n, int m) const {
    const double c_lin = it_.c_prev(n, m) / (kLength * kLength);
    const double ratio = scn_.p_jam / sp_.scaling.p_ref;
    return ratio * (2.0 / c_lin - (1.0 / (c_lin * c_lin)) * P_.var(L_.c[n][m])) +
           1.0 / (sp_.scaling.kfac * sp_.scaling.beta);
  }

  // ||q_s - q_hat||^2 <= (1 + theta)(C + H_S^2 - v - theta r^2).
  void sprocedure_schur(int n, int m) {
    const auto& w = scn_.wardens[m];
    const auto x = offset(L_.q_s_expr[n], w.est_pos);
    const Vec2 g = (it_.traj.slots[n].q_s - w.est_pos) / kLength;
    const LinExpr c_m = g.squaredNorm() + 2.0 * (g.x() * (x[0] - g.x()) + g.y() * (x[1] - g.y()));
    const double hs = scn_.s_alt / kLength;
    const double rr = w.radius / kLength;
    const LinExpr second = c_m + hs * hs - P_.var(L_.v[n][m]) - (rr * rr) * P_.var(L_.theta[n][m]);
    P_.add_rsoc({x[0], x[1]}, 0.5 * (1.0 + P_.var(L_.theta[n][m])), second,
                fmt::format("schur[n={},m={}]", n, m));
  }

  // A(n) + ln(p_scale / (p_ref gamma_cap)) <= ln b + ln v, with A the tangent of ln P at P_l.
  void covert_cap_constraint(int n, int m) {
    const auto tag = fmt::format("[n={},m={}]", n, m);
    P_.add_log_epigraph(P_.var(L_.lb[n][m]), P_.var(L_.b[n][m]), "lb<=ln b" + tag);
    P_.add_log_epigraph(P_.var(L_.lv[n][m]), P_.var(L_.v[n][m]), "lv<=ln v" + tag);
    const double p_lin = it_.traj.slots[n].p_s / sp_.scaling.p_scale;
    const LinExpr a = std::log(p_lin) + (1.0 / p_lin) * (P_.var(L_.p[n]) - p_lin);
    const double shift = std::log(sp_.scaling.p_scale / (sp_.scaling.p_ref * sp_.gamma_cap));
    P_.add_affine(a + shift, Sense::le, P_.var(L_.lb[n][m]) + P_.var(L_.lv[n][m]), "cap" + tag);
  }

  void velocity_constraints() {
    const double vs = scn_.max_step_s() / kLength;
    const double vj = scn_.max_step_j() / kLength;
    for (int n = 0; n + 1 < N_; ++n) {
      if (!s_frozen()) {
        const auto& a = L_.q_s_expr[n];
        const auto& b = L_.q_s_expr[n + 1];
        P_.add_soc({b[0] - a[0], b[1] - a[1]}, vs, fmt::format("vel_s[n={}]", n));
      }
      if (!j_frozen() && !j_hover()) {
        const auto& a = L_.q_j_expr[n];
        const auto& b = L_.q_j_expr[n + 1];
        P_.add_soc({b[0] - a[0], b[1] - a[1]}, vj, fmt::format("vel_j[n={}]", n));
      }
    }
  }

  const Scenario& scn_;
  const Iterate& it_;
  Subproblem sp_;
  ConvexProgram& P_;
  SubproblemLayout& L_;
  int N_ = 0, K_ = 0, M_ = 0;
};

Vec2 eval_point(const std::array<LinExpr, 2>& e, const std::vector<double>& x) {
  return Vec2(e[0].eval(x), e[1].eval(x)) * kLength;
}

}  // namespace

Subproblem assemble_subproblem(const Scenario& scn, const Iterate& it, AntennaMode mode, Benchmark bench) {
  return Builder(scn, it, mode, bench).build();
}

Trajectory Subproblem::trajectory(const std::vector<double>& values, const Scenario& scn) const {
  Trajectory t;
  t.slots.resize(layout.p.size());
  for (std::size_t n = 0; n < t.slots.size(); ++n) {
    t.slots[n].q_s = layout.q_s_fixed[n].value_or(eval_point(layout.q_s_expr[n], values));
    t.slots[n].q_j = layout.q_j_fixed[n].value_or(eval_point(layout.q_j_expr[n], values));
    t.slots[n].p_s = std::clamp(values[static_cast<std::size_t>(layout.p[n])] * scaling.p_scale, 0.0, scn.p_max);
  }
  return t;
}

std::vector<double> Subproblem::point_for(const Trajectory& traj, const Scenario& scn) const {
  std::vector<double> x(static_cast<std::size_t>(program.num_variables()), 0.0);
  auto set = [&](int id, double v) {
    if (id >= 0) x[static_cast<std::size_t>(id)] = v;
  };
  const double l = scaling.length;
  const std::size_t N = traj.slots.size();
  for (std::size_t n = 0; n < N; ++n) {
    const auto& s = traj.slots[n];
    set(layout.p[n], s.p_s / scaling.p_scale);
    for (int a = 0; a < 2; ++a) {
      set(layout.q_s[n][a], s.q_s[a] / l);
      set(layout.q_j[n][a], s.q_j[a] / l);
    }
  }
  const double hs = scn.s_alt / l;
  const double hj = scn.j_alt / l;
  for (std::size_t n = 0; n < N; ++n) {
    const auto& s = traj.slots[n];
    for (std::size_t k = 0; k < layout.d[n].size(); ++k) {
      const double d = (s.q_s - scn.users[k]).squaredNorm() / (l * l) + hs * hs;
      set(layout.d[n][k], d);
      set(layout.r[n][k], std::log(s.p_s / scaling.p_scale + d / scaling.alpha));
    }
    for (std::size_t m = 0; m < layout.b[n].size(); ++m) {
      const auto& w = scn.wardens[m];
      const double rr = w.radius / l;
      const double tj = (s.q_j - w.est_pos).norm() / l;
      const double c = (tj + rr) * (tj + rr) + hj * hj;
      set(layout.tj[n][m], tj);
      set(layout.c[n][m], c);
      const double xs = (s.q_s - w.est_pos).norm() / l;
      double theta = 0.0;
      double v = xs * xs + hs * hs;
      if (rr > 0.0) {
        theta = xs >= rr ? xs / rr - 1.0 : 0.0;
        v = std::pow(std::max(xs - rr, 0.0), 2) + hs * hs;
      }
      set(layout.theta[n][m], theta);
      set(layout.v[n][m], v);
      set(layout.lv[n][m], std::log(v));
    }
  }
  // b bounds and the rate bounds depend on the variables filled above.
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < layout.b[n].size(); ++m) {
      const double b = layout.b_bound[n][m].eval(x);
      set(layout.b[n][m], b);
      set(layout.lb[n][m], std::log(b));
    }
  double eta = std::numeric_limits<double>::infinity();
  for (const auto& e : layout.avg_rate_bound) eta = std::min(eta, e.eval(x));
  set(layout.eta, eta);
  return x;
}

}  // namespace covert
