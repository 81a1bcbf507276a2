// Lowers a ConvexProgram to Clarabel's standard form
//   minimize q'x  s.t.  A x + s = b,  s in K
// with K ordered as zero, nonnegative, second-order and exponential cones.

#include <clarabel_ffi.h>

#include <cmath>
#include <cstdint>

#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "covert/conic.hpp"
#include "covert/errors.hpp"

namespace covert {

namespace {

class Lowering {
 public:
  explicit Lowering(int n) : n_(n) {}

  // Appends a slack row s_r = e(x), i.e. A_r = -coefs, b_r = constant.
  void row(const LinExpr& e) {
    for (const auto& [v, c] : e.terms()) trips_.emplace_back(rows_, v, -c);
    b_.push_back(e.constant());
    ++rows_;
  }
  void cone(std::uint8_t type, std::size_t dim) {
    if (!types_.empty() && types_.back() == type && type != CLARABEL_FFI_CONE_SOC &&
        type != CLARABEL_FFI_CONE_EXP) {
      dims_.back() += dim;
      return;
    }
    types_.push_back(type);
    dims_.push_back(dim);
  }

  int n_;
  int rows_ = 0;
  std::vector<Eigen::Triplet<double>> trips_;
  std::vector<double> b_;
  std::vector<std::uint8_t> types_;
  std::vector<std::size_t> dims_;
};

SolveStatus map_status(int code) {
  switch (code) {
    case CLARABEL_FFI_SOLVED:
    case CLARABEL_FFI_ALMOST_SOLVED: return SolveStatus::optimal;
    case CLARABEL_FFI_PRIMAL_INFEASIBLE:
    case CLARABEL_FFI_ALMOST_PRIMAL_INFEASIBLE: return SolveStatus::infeasible;
    case CLARABEL_FFI_DUAL_INFEASIBLE:
    case CLARABEL_FFI_ALMOST_DUAL_INFEASIBLE: return SolveStatus::unbounded;
    default: return SolveStatus::numerical_limit;
  }
}

const char* backend_name(int code) {
  static const char* names[] = {"unsolved", "solved", "primal_infeasible", "dual_infeasible",
                                "almost_solved", "almost_primal_infeasible", "almost_dual_infeasible",
                                "max_iterations", "max_time", "numerical_error",
                                "insufficient_progress", "callback_terminated"};
  return code >= 0 && code < 12 ? names[code] : "unknown";
}

}  // namespace

SolveOutcome solve(const ConvexProgram& program, const SolveOptions& opts) {
  const int n = program.num_variables();
  Lowering L(n);

  for (const auto& a : program.affine()) {
    if (a.sense != Sense::eq) continue;
    L.row(-a.expr);
    L.cone(CLARABEL_FFI_CONE_ZERO, 1);
  }
  for (const auto& a : program.affine()) {
    if (a.sense == Sense::eq) continue;
    // expr <= 0  <=>  s = -expr >= 0
    L.row(a.sense == Sense::le ? -a.expr : a.expr);
    L.cone(CLARABEL_FFI_CONE_NONNEG, 1);
  }
  for (int i = 0; i < n; ++i) {
    const auto& v = program.variables()[static_cast<std::size_t>(i)];
    if (std::isfinite(v.lb)) {
      L.row(LinExpr::term(i) - v.lb);
      L.cone(CLARABEL_FFI_CONE_NONNEG, 1);
    }
    if (std::isfinite(v.ub)) {
      L.row(v.ub - LinExpr::term(i));
      L.cone(CLARABEL_FFI_CONE_NONNEG, 1);
    }
  }
  for (const auto& c : program.soc()) {
    L.row(c.t);
    for (const auto& e : c.x) L.row(e);
    L.cone(CLARABEL_FFI_CONE_SOC, c.x.size() + 1);
  }
  for (const auto& c : program.rsoc()) {
    L.row(c.a + c.b);
    L.row(c.a - c.b);
    for (const auto& e : c.x) L.row(std::sqrt(2.0) * e);
    L.cone(CLARABEL_FFI_CONE_SOC, c.x.size() + 2);
  }
  for (const auto& c : program.exp()) {
    // (t, 1, s) in K_exp  <=>  exp(t) <= s
    L.row(c.t);
    L.row(LinExpr(1.0));
    L.row(c.s);
    L.cone(CLARABEL_FFI_CONE_EXP, 3);
  }

  const int m = L.rows_;
  Eigen::SparseMatrix<double, Eigen::ColMajor, std::int64_t> A(m, n);
  A.setFromTriplets(L.trips_.begin(), L.trips_.end());
  A.prune(0.0);
  A.makeCompressed();
  std::vector<std::size_t> colptr(static_cast<std::size_t>(n) + 1), rowval(static_cast<std::size_t>(A.nonZeros()));
  for (int j = 0; j <= n; ++j) colptr[static_cast<std::size_t>(j)] = static_cast<std::size_t>(A.outerIndexPtr()[j]);
  for (std::size_t k = 0; k < rowval.size(); ++k) rowval[k] = static_cast<std::size_t>(A.innerIndexPtr()[k]);
  std::vector<double> nzval(A.valuePtr(), A.valuePtr() + A.nonZeros());

  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  const double sign = program.maximizing() ? -1.0 : 1.0;
  for (const auto& [v, c] : program.objective().terms()) q[static_cast<std::size_t>(v)] += sign * c;

  ClarabelFfiSettings settings{};
  settings.max_iter = static_cast<std::uint32_t>(opts.max_iter);
  settings.tol_gap_abs = opts.gap_tol;
  settings.tol_gap_rel = opts.gap_tol;
  settings.tol_feas = opts.feas_tol;
  settings.verbose = opts.verbose ? 1 : 0;

  std::vector<double> x(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(m));
  ClarabelFfiResult res{};
  const int rc = clarabel_ffi_solve(static_cast<std::size_t>(n), static_cast<std::size_t>(m), q.data(),
                                    colptr.data(), rowval.data(), nzval.data(), L.b_.data(),
                                    L.types_.size(), L.types_.data(), L.dims_.data(), &settings,
                                    x.data(), z.data(), &res);
  if (rc != 0) throw BackendError(fmt::format("backend rejected the problem (code {})", rc));

  SolveOutcome out;
  out.backend_status = backend_name(res.status);
  out.iterations = static_cast<int>(res.iterations);
  out.status = map_status(res.status);
  if (out.status != SolveStatus::optimal) return out;

  const Violation viol = program.max_violation(x);
  out.residual = viol.amount;
  if (!(viol.amount <= opts.feas_tol)) {
    out.status = SolveStatus::numerical_limit;
    out.backend_status += fmt::format(" (residual {:.3e} at {})", viol.amount, viol.where);
    return out;
  }
  out.objective = program.objective().eval(x);
  out.values = std::move(x);
  return out;
}

}  // namespace covert
