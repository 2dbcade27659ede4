#include "cachesched/schedule.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cachesched {

Schedule build_schedule(const CacheProblem& problem, const AssignmentTensor& assignment, const WeightMatrix& weights) {
  const auto& tl = problem.timeline;
  Schedule s;
  s.hyper_period = tl.hyper_period;
  s.core_count = problem.cores();
  for (int j = 0; j < problem.cores(); ++j) {
    for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
      const int ki = static_cast<int>(k);
      const Rational len(tl.intervals.duration(k));
      Rational cursor(tl.intervals.start(k));
      Rational share(0);
      for (int i : tl.present[k]) {  // ascending job id
        if (!assignment.get(i, j, ki)) continue;
        const Rational& w = weights.at(i, ki);
        if (w.is_zero()) continue;
        share += w;
        if (share > Rational(1))
          throw std::invalid_argument("core " + std::to_string(j) + " overloaded on interval " + std::to_string(k));
        const Rational end = cursor + w * len;
        s.slices.push_back(TimeSlice{i, tl.jobs[static_cast<std::size_t>(i)].task_id, j, cursor, end, ki});
        cursor = end;
      }
    }
  }
  s.metrics = compute_metrics(s);
  return s;
}

long count_migrations(const Schedule& schedule) {
  // job -> (interval -> core) of executed intervals
  std::map<int, std::map<int, int>> runs;
  for (const auto& sl : schedule.slices) runs[sl.job_id][sl.interval] = sl.core;
  long migrations = 0;
  for (const auto& [job, by_interval] : runs) {
    int prev = -1;
    for (const auto& [k, core] : by_interval) {
      if (prev >= 0 && core != prev) ++migrations;
      prev = core;
    }
  }
  return migrations;
}

ScheduleMetrics compute_metrics(const Schedule& schedule) {
  ScheduleMetrics m;
  m.migrations = count_migrations(schedule);
  std::vector<Rational> busy(static_cast<std::size_t>(schedule.core_count), Rational(0));
  std::map<int, std::vector<std::pair<Rational, Rational>>> by_job;
  for (const auto& sl : schedule.slices) {
    busy[static_cast<std::size_t>(sl.core)] += sl.end - sl.start;
    by_job[sl.job_id].emplace_back(sl.start, sl.end);
  }
  for (auto& [job, parts] : by_job) {
    std::sort(parts.begin(), parts.end());
    for (std::size_t p = 1; p < parts.size(); ++p)
      if (parts[p].first != parts[p - 1].second) ++m.preemptions;
  }
  for (const auto& b : busy)
    m.core_utilization.push_back(schedule.hyper_period > 0 ? b.to_double() / static_cast<double>(schedule.hyper_period) : 0);
  return m;
}

const char* to_string(ScheduleRule rule) {
  switch (rule) {
    case ScheduleRule::ExecutionMismatch: return "execution-mismatch";
    case ScheduleRule::OutsideWindow: return "outside-window";
    case ScheduleRule::CoreOverlap: return "core-overlap";
    case ScheduleRule::SelfParallel: return "self-parallel";
    case ScheduleRule::BadSlice: return "bad-slice";
  }
  return "?";
}

std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule, const TaskSet& task_set,
                                                 std::span<const Job> jobs) {
  std::vector<ScheduleViolation> out;
  std::vector<Rational> executed(jobs.size(), Rational(0));
  std::map<int, std::vector<const TimeSlice*>> per_core, per_job;

  for (const auto& sl : schedule.slices) {
    if (sl.job_id < 0 || static_cast<std::size_t>(sl.job_id) >= jobs.size() || sl.core < 0 ||
        sl.core >= task_set.core_count || !(sl.start < sl.end)) {
      out.push_back({ScheduleRule::BadSlice, sl.job_id, sl.core, "malformed slice"});
      continue;
    }
    const Job& job = jobs[static_cast<std::size_t>(sl.job_id)];
    if (sl.start < Rational(job.release) || sl.end > Rational(job.deadline))
      out.push_back({ScheduleRule::OutsideWindow, sl.job_id, sl.core,
                     "[" + sl.start.to_string() + ", " + sl.end.to_string() + ") outside release window"});
    executed[static_cast<std::size_t>(sl.job_id)] += sl.end - sl.start;
    per_core[sl.core].push_back(&sl);
    per_job[sl.job_id].push_back(&sl);
  }

  for (const Job& job : jobs) {
    const Rational& got = executed[static_cast<std::size_t>(job.job_id)];
    if (got != Rational(job.wcet))
      out.push_back({ScheduleRule::ExecutionMismatch, job.job_id, -1,
                     "executed " + got.to_string() + " of wcet " + std::to_string(job.wcet)});
  }

  auto by_start = [](const TimeSlice* a, const TimeSlice* b) { return a->start < b->start; };
  for (auto& [core, list] : per_core) {
    std::sort(list.begin(), list.end(), by_start);
    for (std::size_t p = 1; p < list.size(); ++p)
      if (list[p]->start < list[p - 1]->end)
        out.push_back({ScheduleRule::CoreOverlap, list[p]->job_id, core,
                       "overlaps job " + std::to_string(list[p - 1]->job_id)});
  }
  for (auto& [job, list] : per_job) {
    std::sort(list.begin(), list.end(), by_start);
    for (std::size_t p = 1; p < list.size(); ++p)
      if (list[p]->start < list[p - 1]->end && list[p]->core != list[p - 1]->core)
        out.push_back({ScheduleRule::SelfParallel, job, list[p]->core, "runs on two cores at once"});
  }
  return out;
}

}  // namespace cachesched
