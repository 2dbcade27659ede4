#include "cachesched/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cachesched {

int LinearProgram::add_variable(double lower, double upper, double objective) {
  lower_.push_back(lower);
  upper_.push_back(upper);
  objective_.push_back(objective);
  return variable_count() - 1;
}

int LinearProgram::add_constraint(std::vector<LinearTerm> terms, Relation relation, double rhs, std::string label) {
  rows_.push_back(Constraint{std::move(terms), relation, rhs, std::move(label)});
  return constraint_count() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  lower_[static_cast<std::size_t>(var)] = lower;
  upper_[static_cast<std::size_t>(var)] = upper;
}

void LinearProgram::validate() const {
  for (int v = 0; v < variable_count(); ++v) {
    if (!std::isfinite(lower_[v])) throw std::invalid_argument("LinearProgram: variable lower bound must be finite");
    if (lower_[v] > upper_[v]) throw std::invalid_argument("LinearProgram: lower bound exceeds upper bound");
  }
  for (const auto& row : rows_) {
    for (const auto& t : row.terms) {
      if (t.var < 0 || t.var >= variable_count())
        throw std::invalid_argument("LinearProgram: row '" + row.label + "' references unknown variable");
    }
  }
}

double LinearProgram::max_violation(const std::vector<double>& values) const {
  double worst = 0;
  for (int v = 0; v < variable_count(); ++v) {
    worst = std::max(worst, lower_[v] - values[v]);
    worst = std::max(worst, values[v] - upper_[v]);
  }
  for (const auto& row : rows_) {
    double lhs = 0;
    for (const auto& t : row.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
    switch (row.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::fabs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

double LinearProgram::evaluate(const std::vector<double>& values) const {
  double z = 0;
  for (int v = 0; v < variable_count(); ++v) z += objective_[v] * values[v];
  return z;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// Tableau for  max c'x  s.t.  A x (<= or >=) b,  x >= 0,  b >= 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0), b_(rows, 0.0),
                                basis_(rows, -1), z_(cols, 0.0) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  void pivot(int pr, int pc) {
    double* prow = &a_[static_cast<std::size_t>(pr) * cols_];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c < cols_; ++c) prow[c] *= inv;
    b_[pr] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[static_cast<std::size_t>(r) * cols_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
      b_[r] -= f * b_[pr];
    }
    const double f = z_[pc];
    if (f != 0.0) {
      for (int c = 0; c < cols_; ++c) z_[c] -= f * prow[c];
      z_[pc] = 0.0;
      zval_ += f * b_[pr];
    }
    basis_[pr] = pc;
  }

  // Reduced costs for objective `cost` under the current basis.
  void price(const std::vector<double>& cost) {
    z_ = cost;
    zval_ = 0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c < cols_; ++c) z_[c] -= cb * at(r, c);
      zval_ += cb * b_[r];
    }
  }

  enum class Result { Optimal, Unbounded, Limit };

  // Bland's rule: lowest-index improving column, ratio ties to lowest basic index.
  Result iterate(const std::vector<char>& allowed, double tol, long& pivots, long cap) {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < cols_; ++c) {
        if (allowed[c] && z_[c] > tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return Result::Optimal;
      int leave = -1;
      double best = 0;
      for (int r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= tol) continue;
        const double ratio = std::max(b_[r], 0.0) / coef;
        if (leave < 0 || ratio < best - tol || (ratio <= best + tol && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return Result::Unbounded;
      if (pivots >= cap) return Result::Limit;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void drop_row(int r) {
    const int last = rows_ - 1;
    if (r != last) {
      std::copy_n(&a_[static_cast<std::size_t>(last) * cols_], cols_, &a_[static_cast<std::size_t>(r) * cols_]);
      b_[r] = b_[last];
      basis_[r] = basis_[last];
    }
    --rows_;
    a_.resize(static_cast<std::size_t>(rows_) * cols_);
    b_.resize(rows_);
    basis_.resize(rows_);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double rhs(int r) const { return b_[r]; }
  void set_rhs(int r, double v) { b_[r] = v; }
  int basic(int r) const { return basis_[r]; }
  void set_basic(int r, int c) { basis_[r] = c; }
  double value() const { return zval_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<int> basis_;
  std::vector<double> z_;
  double zval_ = 0;
};

struct StandardRow {
  std::vector<LinearTerm> terms;  // over shifted variables
  double rhs;                     // row reads  terms <= rhs
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, double tolerance, long pivot_cap) {
  lp.validate();
  LpOutcome out;
  const int n = lp.variable_count();
  const auto& lo = lp.lower();
  const auto& hi = lp.upper();

  // Shift x = lo + x', rewrite everything as  sum a x' <= b.
  std::vector<StandardRow> rows;
  auto push_le = [&](const std::vector<LinearTerm>& terms, double rhs, double sign) {
    StandardRow row{{}, sign * rhs};
    row.terms.reserve(terms.size());
    for (const auto& t : terms) {
      row.rhs -= sign * t.coef * lo[static_cast<std::size_t>(t.var)];
      row.terms.push_back(LinearTerm{t.var, sign * t.coef});
    }
    rows.push_back(std::move(row));
  };
  for (const auto& c : lp.constraints()) {
    switch (c.relation) {
      case Relation::LessEqual: push_le(c.terms, c.rhs, 1.0); break;
      case Relation::GreaterEqual: push_le(c.terms, c.rhs, -1.0); break;
      case Relation::Equal:
        push_le(c.terms, c.rhs, 1.0);
        push_le(c.terms, c.rhs, -1.0);
        break;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (std::isfinite(hi[v])) rows.push_back(StandardRow{{LinearTerm{v, 1.0}}, hi[v] - lo[v]});
  }

  const int m = static_cast<int>(rows.size());
  int artificial_count = 0;
  for (const auto& r : rows) artificial_count += r.rhs < 0 ? 1 : 0;

  // Columns: [structural n][slack/surplus m][artificial].
  const int cols = n + m + artificial_count;
  Tableau tab(m, cols);
  double scale = 1.0;
  int next_art = n + m;
  for (int r = 0; r < m; ++r) {
    const bool flip = rows[r].rhs < 0;
    const double s = flip ? -1.0 : 1.0;
    for (const auto& t : rows[r].terms) tab.at(r, t.var) += s * t.coef;
    tab.set_rhs(r, s * rows[r].rhs);
    scale = std::max(scale, std::fabs(rows[r].rhs));
    tab.at(r, n + r) = s;  // slack (+1) or surplus (-1)
    if (flip) {
      tab.at(r, next_art) = 1.0;
      tab.set_basic(r, next_art++);
    } else {
      tab.set_basic(r, n + r);
    }
  }

  std::vector<char> allowed(cols, 1);

  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int c = n + m; c < cols; ++c) phase1[c] = -1.0;
    tab.price(phase1);
    auto res = tab.iterate(allowed, tolerance, out.pivots, pivot_cap);
    if (res == Tableau::Result::Limit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    if (tab.value() < -tolerance * scale * 10) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    for (int r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basic(r) < n + m) continue;
      int col = -1;
      for (int c = 0; c < n + m; ++c) {
        if (std::fabs(tab.at(r, c)) > tolerance) {
          col = c;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
        ++out.pivots;
      } else {
        tab.drop_row(r);
      }
    }
    for (int c = n + m; c < cols; ++c) allowed[c] = 0;
  }

  std::vector<double> cost(cols, 0.0);
  const double sign = lp.sense() == Sense::Maximize ? 1.0 : -1.0;
  for (int v = 0; v < n; ++v) cost[v] = sign * lp.objective()[v];
  tab.price(cost);
  auto res = tab.iterate(allowed, tolerance, out.pivots, pivot_cap);
  if (res == Tableau::Result::Limit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (res == Tableau::Result::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.values.assign(lo.begin(), lo.end());
  for (int r = 0; r < tab.rows(); ++r) {
    const int c = tab.basic(r);
    if (c < n) out.values[static_cast<std::size_t>(c)] += std::max(tab.rhs(r), 0.0);
  }
  out.objective = lp.evaluate(out.values);
  return out;
}

}  // namespace cachesched
