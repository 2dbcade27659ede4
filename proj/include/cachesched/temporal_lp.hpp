#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cachesched/linear_program.hpp"
#include "cachesched/rational.hpp"
#include "cachesched/task_model.hpp"

namespace cachesched {

// Fraction of one processor given to each job on each interval. Entries
// outside a job's window are zero.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t jobs, std::size_t intervals) : intervals_(intervals), w_(jobs * intervals) {}

  std::size_t job_count() const { return intervals_ == 0 ? 0 : w_.size() / intervals_; }
  std::size_t interval_count() const { return intervals_; }

  const Rational& at(int job, int interval) const { return w_[index(job, interval)]; }
  void set(int job, int interval, Rational value) { w_[index(job, interval)] = value; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t index(int job, int interval) const {
    return static_cast<std::size_t>(job) * intervals_ + static_cast<std::size_t>(interval);
  }
  std::size_t intervals_ = 0;
  std::vector<Rational> w_;
};

// Feasibility LP over w[i][k]: interval capacity, box bounds, completion.
struct WeightLp {
  LinearProgram lp;
  std::vector<std::pair<int, int>> slot_of_var;  // variable -> (job, interval)
  std::vector<int> capacity_rows;                 // one per interval
  std::vector<int> completion_rows;               // one per job
};

WeightLp build_weight_lp(const JobTimeline& timeline, int core_count);

// Rounds LP values to exact fractions (denominator <= max_den).
WeightMatrix weights_from_lp(const WeightLp& model, const LpOutcome& outcome, const JobTimeline& timeline,
                             std::int64_t max_den = 1'000'000'000);

// Constant-rate witness w = C_i / P_i on every interval of the job's window.
WeightMatrix fluid_weights(const JobTimeline& timeline);

enum class WeightRule {
  IntervalCapacity,  // sum of weights on an interval <= m
  WeightBounds,      // 0 <= w <= 1
  Completion,        // sum w * |I_k| == C_i
  OutsideWindow,     // nonzero weight outside [release, deadline)
};

const char* to_string(WeightRule rule);

struct WeightViolation {
  WeightRule rule;
  int job = -1;       // -1 for interval-level rules
  int interval = -1;  // -1 for job-level rules
  double slack = 0;   // signed amount by which the rule is missed

  std::string describe() const;
};

inline constexpr double kCheckTolerance = 1e-6;

std::vector<WeightViolation> check_weights(const WeightMatrix& weights, const JobTimeline& timeline, int core_count,
                                           double tolerance = kCheckTolerance);

// True when the weight LP of the task set is feasible according to the simplex.
bool temporally_feasible(const TaskSet& task_set);

}  // namespace cachesched
