#pragma once

#include <span>
#include <string>
#include <vector>

#include "cachesched/problem.hpp"
#include "cachesched/rational.hpp"

namespace cachesched {

struct TimeSlice {
  int job_id = 0;
  int task_id = 0;
  int core = 0;
  Rational start;
  Rational end;
  int interval = 0;

  friend bool operator==(const TimeSlice&, const TimeSlice&) = default;
};

struct ScheduleMetrics {
  long migrations = 0;
  long preemptions = 0;  // times a job's execution is split into separate slices
  std::vector<double> core_utilization;
};

// Cyclic timetable over one hyper-period; slices ordered by (core, start).
struct Schedule {
  Tick hyper_period = 0;
  int core_count = 0;
  std::vector<TimeSlice> slices;
  ScheduleMetrics metrics;
};

// Lays out, per (core, interval), the assigned jobs back to back from the
// interval start in ascending job id, each for w * |I_k|. Throws
// std::invalid_argument when a core's weight on an interval exceeds 1.
Schedule build_schedule(const CacheProblem& problem, const AssignmentTensor& assignment, const WeightMatrix& weights);

// Number of consecutive executed-interval pairs of a job that run on
// different cores.
long count_migrations(const Schedule& schedule);

ScheduleMetrics compute_metrics(const Schedule& schedule);

enum class ScheduleRule { ExecutionMismatch, OutsideWindow, CoreOverlap, SelfParallel, BadSlice };

const char* to_string(ScheduleRule rule);

struct ScheduleViolation {
  ScheduleRule rule;
  int job = -1;
  int core = -1;
  std::string detail;
};

std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule, const TaskSet& task_set,
                                                 std::span<const Job> jobs);

}  // namespace cachesched
