#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace covert {

/// Affine expression sum_i coef_i * x_{var_i} + constant.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT: implicit by design
  static LinExpr term(int var, double coef = 1.0);

  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);

  double eval(const std::vector<double>& x) const;

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double s, LinExpr a);
LinExpr operator*(LinExpr a, double s);

enum class Sense { le, ge, eq };

struct Variable {
  std::string name;
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();
};

/// lhs (sense) rhs, stored as lhs - rhs (sense) 0.
struct AffineConstraint {
  LinExpr expr;
  Sense sense;
  std::string tag;
};

/// ||x|| <= t
struct SocConstraint {
  std::vector<LinExpr> x;
  LinExpr t;
  std::string tag;
};

/// ||x||^2 <= 2 a b, a >= 0, b >= 0
struct RsocConstraint {
  std::vector<LinExpr> x;
  LinExpr a;
  LinExpr b;
  std::string tag;
};

/// t <= ln(s)
struct ExpConstraint {
  LinExpr t;
  LinExpr s;
  std::string tag;
};

struct ProgramCensus {
  int variables = 0;
  int bounded_variables = 0;
  int affine_eq = 0;
  int affine_ineq = 0;
  int soc = 0;
  int rsoc = 0;
  int exp = 0;

  bool operator==(const ProgramCensus&) const = default;
};

struct Violation {
  double amount = 0.0;
  std::string where;
};

class ConvexProgram {
 public:
  int add_variable(std::string name,
                   double lb = -std::numeric_limits<double>::infinity(),
                   double ub = std::numeric_limits<double>::infinity());
  LinExpr var(int id) const;

  int add_affine(const LinExpr& lhs, Sense sense, const LinExpr& rhs, std::string tag = {});
  int add_soc(std::vector<LinExpr> x, LinExpr t, std::string tag = {});
  int add_rsoc(std::vector<LinExpr> x, LinExpr a, LinExpr b, std::string tag = {});
  int add_log_epigraph(LinExpr t, LinExpr s, std::string tag = {});

  void maximize(LinExpr objective);
  void minimize(LinExpr objective);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<AffineConstraint>& affine() const { return affine_; }
  const std::vector<SocConstraint>& soc() const { return soc_; }
  const std::vector<RsocConstraint>& rsoc() const { return rsoc_; }
  const std::vector<ExpConstraint>& exp() const { return exp_; }
  const LinExpr& objective() const { return objective_; }
  bool maximizing() const { return maximize_; }

  ProgramCensus census() const;

  /// Largest constraint violation at `x` (0 when feasible), with the
  /// offending constraint's tag.
  Violation max_violation(const std::vector<double>& x) const;

  /// Portable text listing of variables, objective and constraints.
  std::string dump() const;

 private:
  void check(const LinExpr& e) const;

  std::vector<Variable> variables_;
  std::vector<AffineConstraint> affine_;
  std::vector<SocConstraint> soc_;
  std::vector<RsocConstraint> rsoc_;
  std::vector<ExpConstraint> exp_;
  LinExpr objective_;
  bool maximize_ = true;
};

struct SolveOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

enum class SolveStatus { optimal, infeasible, unbounded, numerical_limit };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::numerical_limit;
  std::vector<double> values;  // indexed by variable id; empty unless optimal
  double objective = 0.0;
  double residual = 0.0;       // independent feasibility check
  std::string backend_status;
  int iterations = 0;
};

/// Solves with the bundled interior-point backend. The returned point is
/// re-checked by the IR; `optimal` is reported only if every constraint holds
/// within feas_tol. Throws BackendError on malformed backend calls.
SolveOutcome solve(const ConvexProgram& program, const SolveOptions& opts = {});

}  // namespace covert
