#include "cachesched/task_model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cachesched/errors.hpp"

namespace cachesched {

std::vector<std::string> validate_task_set(const TaskSet& task_set, Tick guard) {
  std::vector<std::string> problems;
  if (task_set.tasks.empty()) problems.emplace_back("task set: no tasks");
  if (task_set.core_count < 1) problems.emplace_back("platform: core count must be >= 1");
  if (task_set.cache_capacity < 1) problems.emplace_back("platform: L1 capacity must be >= 1 byte");

  bool periods_ok = true;
  for (std::size_t i = 0; i < task_set.tasks.size(); ++i) {
    const Task& t = task_set.tasks[i];
    const std::string who = "task '" + t.name + "'";
    if (t.id != static_cast<int>(i)) problems.push_back(who + ": id " + std::to_string(t.id) + " is not its index " + std::to_string(i));
    if (t.period < 1) {
      problems.push_back(who + ": period must be >= 1");
      periods_ok = false;
    }
    if (t.wcet < 1) problems.push_back(who + ": wcet must be >= 1");
    if (t.wcet > t.period && t.period >= 1)
      problems.push_back(who + ": wcet " + std::to_string(t.wcet) + " exceeds period " + std::to_string(t.period));
    if (t.wss < 0) problems.push_back(who + ": wss must be >= 0");
    if (task_set.cache_capacity >= 1 && t.wss > task_set.cache_capacity)
      problems.push_back(who + ": wss " + std::to_string(t.wss) + " exceeds L1 capacity " +
                         std::to_string(task_set.cache_capacity));
  }
  if (periods_ok && !task_set.tasks.empty()) {
    try {
      hyper_period(task_set, guard);
    } catch (const GuardError& e) {
      problems.emplace_back(e.what());
    }
  }
  return problems;
}

void require_valid(const TaskSet& task_set, Tick guard) {
  auto problems = validate_task_set(task_set, guard);
  if (problems.empty()) return;
  std::ostringstream os;
  for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
  throw ValidationError(os.str());
}

Tick hyper_period(const TaskSet& task_set, Tick guard) {
  Tick h = 1;
  std::vector<Tick> seen;
  for (const Task& t : task_set.tasks) {
    if (t.period < 1) throw ValidationError("task '" + t.name + "': period must be >= 1");
    seen.push_back(t.period);
    __int128 next = static_cast<__int128>(h / std::gcd(h, t.period)) * t.period;
    if (next > guard) {
      std::ostringstream os;
      os << "hyper-period exceeds guard " << guard << " ticks; lcm of periods {";
      for (std::size_t i = 0; i < seen.size(); ++i) os << (i ? ", " : "") << seen[i];
      os << "} is already " << static_cast<long double>(next);
      throw GuardError(os.str());
    }
    h = static_cast<Tick>(next);
  }
  return h;
}

std::vector<Job> generate_jobs(const TaskSet& task_set) {
  if (task_set.tasks.empty()) throw ValidationError("task set: no tasks");
  const Tick h = hyper_period(task_set);
  std::vector<Job> jobs;
  for (const Task& t : task_set.tasks) {
    for (Tick r = 0; r < h; r += t.period) jobs.push_back(Job{0, t.id, r, r + t.period, t.wcet});
  }
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return a.release != b.release ? a.release < b.release : a.task_id < b.task_id;
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) jobs[i].job_id = static_cast<int>(i);
  return jobs;
}

IntervalSet build_intervals(const TaskSet& task_set, std::span<const Job> jobs) {
  IntervalSet out;
  out.boundaries.reserve(jobs.size() + 1);
  for (const Job& j : jobs) out.boundaries.push_back(j.release);
  out.boundaries.push_back(hyper_period(task_set));
  std::sort(out.boundaries.begin(), out.boundaries.end());
  out.boundaries.erase(std::unique(out.boundaries.begin(), out.boundaries.end()), out.boundaries.end());
  return out;
}

JobWindows job_windows(std::span<const Job> jobs, const IntervalSet& intervals) {
  JobWindows out;
  out.intervals.resize(jobs.size());
  const auto& b = intervals.boundaries;
  for (const Job& j : jobs) {
    auto first = std::lower_bound(b.begin(), b.end(), j.release);
    auto last = std::lower_bound(b.begin(), b.end(), j.deadline);
    auto& win = out.intervals[static_cast<std::size_t>(j.job_id)];
    for (auto it = first; it != last && std::next(it) != b.end(); ++it)
      win.push_back(static_cast<int>(it - b.begin()));
  }
  return out;
}

JobTimeline build_timeline(const TaskSet& task_set) {
  JobTimeline tl;
  tl.hyper_period = hyper_period(task_set);
  tl.jobs = generate_jobs(task_set);
  tl.intervals = build_intervals(task_set, tl.jobs);
  tl.windows = job_windows(tl.jobs, tl.intervals);
  tl.present.resize(tl.intervals.size());
  for (const Job& j : tl.jobs)
    for (int k : tl.windows.of(j.job_id)) tl.present[static_cast<std::size_t>(k)].push_back(j.job_id);
  return tl;
}

bool utilization_fits(const TaskSet& task_set) {
  const Tick h = hyper_period(task_set);
  __int128 demand = 0;
  for (const Task& t : task_set.tasks) demand += static_cast<__int128>(t.wcet) * (h / t.period);
  return demand <= static_cast<__int128>(task_set.core_count) * h;
}

double total_utilization(const TaskSet& task_set) {
  double u = 0;
  for (const Task& t : task_set.tasks) u += static_cast<double>(t.wcet) / static_cast<double>(t.period);
  return u;
}

}  // namespace cachesched
