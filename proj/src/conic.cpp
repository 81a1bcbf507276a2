#include "covert/conic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "covert/errors.hpp"

namespace covert {

LinExpr LinExpr::term(int var, double coef) {
  LinExpr e;
  e.terms_.emplace_back(var, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  constant_ += o.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [v, c] : o.terms_) terms_.emplace_back(v, -c);
  constant_ -= o.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms_) t.second *= s;
  constant_ *= s;
  return *this;
}

double LinExpr::eval(const std::vector<double>& x) const {
  double v = constant_;
  for (const auto& [i, c] : terms_) v += c * x[static_cast<std::size_t>(i)];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_limit: return "numerical_limit";
  }
  return "unknown";
}

void ConvexProgram::check(const LinExpr& e) const {
  for (const auto& [v, c] : e.terms()) {
    if (v < 0 || v >= num_variables())
      throw ShapeError(fmt::format("expression references undeclared variable {}", v));
    if (!std::isfinite(c)) throw ShapeError("non-finite coefficient");
  }
  if (!std::isfinite(e.constant())) throw ShapeError("non-finite constant");
}

int ConvexProgram::add_variable(std::string name, double lb, double ub) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub)
    throw ShapeError(fmt::format("variable '{}' has empty bounds [{}, {}]", name, lb, ub));
  variables_.push_back({std::move(name), lb, ub});
  return num_variables() - 1;
}

LinExpr ConvexProgram::var(int id) const {
  if (id < 0 || id >= num_variables()) throw ShapeError(fmt::format("no variable {}", id));
  return LinExpr::term(id);
}

int ConvexProgram::add_affine(const LinExpr& lhs, Sense sense, const LinExpr& rhs, std::string tag) {
  LinExpr e = lhs - rhs;
  check(e);
  affine_.push_back({std::move(e), sense, std::move(tag)});
  return static_cast<int>(affine_.size()) - 1;
}

int ConvexProgram::add_soc(std::vector<LinExpr> x, LinExpr t, std::string tag) {
  if (x.empty()) throw ShapeError("second-order cone needs a nonempty vector part");
  for (const auto& e : x) check(e);
  check(t);
  soc_.push_back({std::move(x), std::move(t), std::move(tag)});
  return static_cast<int>(soc_.size()) - 1;
}

int ConvexProgram::add_rsoc(std::vector<LinExpr> x, LinExpr a, LinExpr b, std::string tag) {
  if (x.empty()) throw ShapeError("rotated cone needs a nonempty vector part");
  for (const auto& e : x) check(e);
  check(a);
  check(b);
  rsoc_.push_back({std::move(x), std::move(a), std::move(b), std::move(tag)});
  return static_cast<int>(rsoc_.size()) - 1;
}

int ConvexProgram::add_log_epigraph(LinExpr t, LinExpr s, std::string tag) {
  check(t);
  check(s);
  exp_.push_back({std::move(t), std::move(s), std::move(tag)});
  return static_cast<int>(exp_.size()) - 1;
}

void ConvexProgram::maximize(LinExpr objective) {
  check(objective);
  objective_ = std::move(objective);
  maximize_ = true;
}

void ConvexProgram::minimize(LinExpr objective) {
  check(objective);
  objective_ = std::move(objective);
  maximize_ = false;
}

ProgramCensus ConvexProgram::census() const {
  ProgramCensus c;
  c.variables = num_variables();
  for (const auto& v : variables_)
    if (std::isfinite(v.lb) || std::isfinite(v.ub)) ++c.bounded_variables;
  for (const auto& a : affine_) (a.sense == Sense::eq ? c.affine_eq : c.affine_ineq)++;
  c.soc = static_cast<int>(soc_.size());
  c.rsoc = static_cast<int>(rsoc_.size());
  c.exp = static_cast<int>(exp_.size());
  return c;
}

Violation ConvexProgram::max_violation(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != num_variables())
    throw ShapeError(fmt::format("point has {} entries, program {}", x.size(), num_variables()));
  Violation worst;
  auto note = [&](double amount, auto&& where) {
    if (amount > worst.amount || std::isnan(amount)) {
      worst.amount = std::isnan(amount) ? std::numeric_limits<double>::infinity() : amount;
      worst.where = where();
    }
  };
  for (int i = 0; i < num_variables(); ++i) {
    const auto& v = variables_[static_cast<std::size_t>(i)];
    note(v.lb - x[static_cast<std::size_t>(i)], [&] { return "lower bound of " + v.name; });
    note(x[static_cast<std::size_t>(i)] - v.ub, [&] { return "upper bound of " + v.name; });
  }
  for (const auto& a : affine_) {
    const double e = a.expr.eval(x);
    const double amount = a.sense == Sense::le ? e : a.sense == Sense::ge ? -e : std::fabs(e);
    note(amount, [&] { return "affine " + a.tag; });
  }
  for (const auto& c : soc_) {
    double sq = 0.0;
    for (const auto& e : c.x) sq += std::pow(e.eval(x), 2);
    note(std::sqrt(sq) - c.t.eval(x), [&] { return "soc " + c.tag; });
  }
  for (const auto& c : rsoc_) {
    // Same (a+b, a-b, sqrt2 x) embedding the backend sees.
    const double a = c.a.eval(x);
    const double b = c.b.eval(x);
    double sq = (a - b) * (a - b);
    for (const auto& e : c.x) sq += 2.0 * std::pow(e.eval(x), 2);
    note(std::sqrt(sq) - (a + b), [&] { return "rsoc " + c.tag; });
  }
  for (const auto& c : exp_) {
    note(std::exp(c.t.eval(x)) - c.s.eval(x), [&] { return "exp " + c.tag; });
  }
  return worst;
}

namespace {

std::string fmt_expr(const LinExpr& e, const std::vector<Variable>& vars) {
  std::string out;
  for (const auto& [v, c] : e.terms())
    out += fmt::format("{}{:.17g}*{}", out.empty() ? "" : " + ", c, vars[static_cast<std::size_t>(v)].name);
  if (e.constant() != 0.0 || out.empty())
    out += fmt::format("{}{:.17g}", out.empty() ? "" : " + ", e.constant());
  return out;
}

}  // namespace

std::string ConvexProgram::dump() const {
  std::ostringstream os;
  os << "variables " << variables_.size() << "\n";
  for (const auto& v : variables_) os << fmt::format("  {} [{:.17g}, {:.17g}]\n", v.name, v.lb, v.ub);
  os << (maximize_ ? "maximize " : "minimize ") << fmt_expr(objective_, variables_) << "\n";
  os << "affine " << affine_.size() << "\n";
  for (const auto& a : affine_) {
    const char* op = a.sense == Sense::le ? "<=" : a.sense == Sense::ge ? ">=" : "==";
    os << fmt::format("  [{}] {} {} 0\n", a.tag, fmt_expr(a.expr, variables_), op);
  }
  auto vec = [&](const std::vector<LinExpr>& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "; " : "") + fmt_expr(x[i], variables_);
    return s;
  };
  os << "soc " << soc_.size() << "\n";
  for (const auto& c : soc_)
    os << fmt::format("  [{}] norm({}) <= {}\n", c.tag, vec(c.x), fmt_expr(c.t, variables_));
  os << "rsoc " << rsoc_.size() << "\n";
  for (const auto& c : rsoc_)
    os << fmt::format("  [{}] norm({})^2 <= 2 ({}) ({})\n", c.tag, vec(c.x), fmt_expr(c.a, variables_),
                      fmt_expr(c.b, variables_));
  os << "exp " << exp_.size() << "\n";
  for (const auto& c : exp_)
    os << fmt::format("  [{}] {} <= ln({})\n", c.tag, fmt_expr(c.t, variables_), fmt_expr(c.s, variables_));
  return os.str();
}

}  // namespace covert
