#pragma once

#include <limits>
#include <string>
#include <vector>

namespace cachesched {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

struct LinearTerm {
  int var = 0;
  double coef = 0;
};

struct Constraint {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0;
  std::string label;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Sparse-row linear program over bounded variables. Lower bounds must be
// finite; upper bounds may be kInfinity.
class LinearProgram {
 public:
  int add_variable(double lower = 0, double upper = kInfinity, double objective = 0);
  int add_constraint(std::vector<LinearTerm> terms, Relation relation, double rhs, std::string label = {});

  int variable_count() const { return static_cast<int>(lower_.size()); }
  int constraint_count() const { return static_cast<int>(rows_.size()); }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Constraint& constraint(int r) const { return rows_[static_cast<std::size_t>(r)]; }

  void set_bounds(int var, double lower, double upper);
  void set_objective(int var, double coef) { objective_[static_cast<std::size_t>(var)] = coef; }
  Sense sense() const { return sense_; }
  void set_sense(Sense s) { sense_ = s; }

  // Throws std::invalid_argument on out-of-range variables or crossed bounds.
  void validate() const;

  // Largest violation of rows and bounds at `values` (0 when feasible).
  double max_violation(const std::vector<double>& values) const;
  double evaluate(const std::vector<double>& values) const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Constraint> rows_;
  Sense sense_ = Sense::Maximize;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // empty unless Optimal
  double objective = 0;
  long pivots = 0;
};

inline constexpr double kLpTolerance = 1e-9;
inline constexpr long kDefaultPivotCap = 1'000'000;

// Dense two-phase primal simplex with Bland's rule. Equality rows are split
// into a pair of inequalities; finite upper bounds become rows.
LpOutcome solve_lp(const LinearProgram& lp, double tolerance = kLpTolerance, long pivot_cap = kDefaultPivotCap);

}  // namespace cachesched
