#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cachesched/affinity.hpp"
#include "cachesched/rational.hpp"
#include "cachesched/task_model.hpp"
#include "cachesched/temporal_lp.hpp"

namespace cachesched {

// Everything the cache-assignment solvers need, derived once from a task set.
struct CacheProblem {
  TaskSet task_set;
  JobTimeline timeline;
  AffinityMatrix affinity;  // task-indexed

  int cores() const { return task_set.core_count; }
  std::size_t job_count() const { return timeline.jobs.size(); }
  std::size_t interval_count() const { return timeline.intervals.size(); }
  std::int64_t capacity() const { return task_set.cache_capacity; }
  std::int64_t wss_of_job(int job) const;
  std::int64_t pair_affinity(int job_a, int job_b) const;
  // Job-interval pairs (i, k) with k in the window of i.
  std::size_t slot_count() const;
};

// Validates the task set and affinity dimensions, then builds the timeline.
CacheProblem make_problem(TaskSet task_set, AffinityMatrix affinity);

// x[i][j][k]: job i occupies cache j during interval k.
class AssignmentTensor {
 public:
  AssignmentTensor() = default;
  AssignmentTensor(std::size_t jobs, int caches, std::size_t intervals)
      : jobs_(jobs), caches_(caches), intervals_(intervals), x_(jobs * static_cast<std::size_t>(caches) * intervals, 0) {}

  std::size_t job_count() const { return jobs_; }
  int cache_count() const { return caches_; }
  std::size_t interval_count() const { return intervals_; }

  bool get(int job, int cache, int interval) const { return x_[index(job, cache, interval)] != 0; }
  void set(int job, int cache, int interval, bool value) { x_[index(job, cache, interval)] = value ? 1 : 0; }

  // First cache holding the job on the interval, or -1.
  int cache_of(int job, int interval) const;
  int assigned_count(int job, int interval) const;
  // Puts the job on exactly `cache` (or nowhere when cache < 0).
  void place(int job, int interval, int cache);

  friend bool operator==(const AssignmentTensor&, const AssignmentTensor&) = default;

 private:
  std::size_t index(int job, int cache, int interval) const {
    return (static_cast<std::size_t>(job) * intervals_ + static_cast<std::size_t>(interval)) *
               static_cast<std::size_t>(caches_) +
           static_cast<std::size_t>(cache);
  }
  std::size_t jobs_ = 0;
  int caches_ = 0;
  std::size_t intervals_ = 0;
  std::vector<std::uint8_t> x_;
};

// How job weights are tied to cache assignment. OneSided: a job with
// positive weight must be assigned. Epsilon: additionally, an assigned job
// gets weight >= epsilon.
struct LinkPolicy {
  enum class Mode { OneSided, Epsilon };
  Mode mode = Mode::OneSided;
  Rational epsilon{1, 1024};
};

enum class Method { Exact, Greedy, LocalSearch, BruteForce };

const char* to_string(Method method);
std::optional<Method> parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::Exact;
  double time_limit_s = 30.0;
  long node_limit = 1'000'000;
  std::uint64_t seed = 0;
  bool weight_by_interval = false;
  LinkPolicy link;
  std::size_t variable_cap = 200'000;
  std::uint64_t brute_force_cap = 10'000'000;
};

// Throws std::invalid_argument for non-positive limits or epsilon outside (0, 1].
void validate_config(const SolverConfig& config);

enum class SolveStatus { Optimal, Feasible, Infeasible, LimitReached };

const char* to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  AssignmentTensor assignment;
  WeightMatrix weights;
  std::int64_t objective = 0;
  std::optional<double> upper_bound;
  long nodes = 0;
  long lp_solves = 0;
  long pivots = 0;
  long moves = 0;
  std::vector<std::int64_t> trace;  // accepted objectives (local search)
  double runtime_ms = 0;
  std::string message;

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
                                     (status == SolveStatus::LimitReached && assignment.job_count() > 0); }
};

}  // namespace cachesched
