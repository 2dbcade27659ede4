#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cachesched {

using Tick = std::int64_t;

inline constexpr Tick kHyperPeriodGuard = Tick{1} << 32;

// Implicit-deadline periodic task. `wss` is the working set size in bytes.
struct Task {
  int id = 0;
  std::string name;
  Tick period = 1;
  Tick wcet = 1;
  std::int64_t wss = 0;
};

struct TaskSet {
  std::vector<Task> tasks;
  int core_count = 1;
  std::int64_t cache_capacity = 0;  // bytes per private L1 data cache
};

// One instance of a task inside the hyper-period.
struct Job {
  int job_id = 0;
  int task_id = 0;
  Tick release = 0;
  Tick deadline = 0;
  Tick wcet = 0;

  Tick period() const { return deadline - release; }
};

// Partition of [0, H) at every job release. Interval k is
// [boundaries[k], boundaries[k+1]).
struct IntervalSet {
  std::vector<Tick> boundaries;

  std::size_t size() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
  Tick start(std::size_t k) const { return boundaries[k]; }
  Tick end(std::size_t k) const { return boundaries[k + 1]; }
  Tick duration(std::size_t k) const { return boundaries[k + 1] - boundaries[k]; }
  Tick hyper_period() const { return boundaries.empty() ? 0 : boundaries.back(); }
};

// Per job, the ascending (and contiguous) interval indices covered by
// [release, deadline).
struct JobWindows {
  std::vector<std::vector<int>> intervals;

  const std::vector<int>& of(int job) const { return intervals[static_cast<std::size_t>(job)]; }
  bool contains(int job, int interval) const {
    const auto& w = of(job);
    return !w.empty() && interval >= w.front() && interval <= w.back();
  }
};

// Jobs, intervals, windows and the jobs present on each interval, all
// derived from one task set.
struct JobTimeline {
  Tick hyper_period = 0;
  std::vector<Job> jobs;
  IntervalSet intervals;
  JobWindows windows;
  std::vector<std::vector<int>> present;  // interval -> ascending job ids
};

// Rule violations of a task set, one human-readable line each. Empty means
// the set is well formed (utilization is not checked here).
std::vector<std::string> validate_task_set(const TaskSet& task_set, Tick guard = kHyperPeriodGuard);

// Throws ValidationError listing every diagnostic of validate_task_set.
void require_valid(const TaskSet& task_set, Tick guard = kHyperPeriodGuard);

// LCM of all periods. Throws GuardError when it exceeds `guard`.
Tick hyper_period(const TaskSet& task_set, Tick guard = kHyperPeriodGuard);

// H/P_i jobs per task, ordered by (release, task_id).
std::vector<Job> generate_jobs(const TaskSet& task_set);

IntervalSet build_intervals(const TaskSet& task_set, std::span<const Job> jobs);

JobWindows job_windows(std::span<const Job> jobs, const IntervalSet& intervals);

JobTimeline build_timeline(const TaskSet& task_set);

// Exact test of sum(C_i / P_i) <= core_count.
bool utilization_fits(const TaskSet& task_set);

double total_utilization(const TaskSet& task_set);

}  // namespace cachesched
