#include "cachesched/problem.hpp"

#include <stdexcept>

#include "cachesched/errors.hpp"

namespace cachesched {

std::int64_t CacheProblem::wss_of_job(int job) const {
  return task_set.tasks[static_cast<std::size_t>(timeline.jobs[static_cast<std::size_t>(job)].task_id)].wss;
}

std::int64_t CacheProblem::pair_affinity(int job_a, int job_b) const {
  return job_affinity(affinity, timeline.jobs, job_a, job_b);
}

std::size_t CacheProblem::slot_count() const {
  std::size_t n = 0;
  for (const auto& w : timeline.windows.intervals) n += w.size();
  return n;
}

CacheProblem make_problem(TaskSet task_set, AffinityMatrix affinity) {
  require_valid(task_set);
  if (affinity.size() != task_set.tasks.size())
    throw ValidationError("affinity matrix size does not match task count");
  CacheProblem p;
  p.timeline = build_timeline(task_set);
  p.task_set = std::move(task_set);
  p.affinity = std::move(affinity);
  return p;
}

int AssignmentTensor::cache_of(int job, int interval) const {
  for (int j = 0; j < caches_; ++j)
    if (get(job, j, interval)) return j;
  return -1;
}

int AssignmentTensor::assigned_count(int job, int interval) const {
  int n = 0;
  for (int j = 0; j < caches_; ++j) n += get(job, j, interval) ? 1 : 0;
  return n;
}

void AssignmentTensor::place(int job, int interval, int cache) {
  for (int j = 0; j < caches_; ++j) set(job, j, interval, j == cache);
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Exact: return "exact";
    case Method::Greedy: return "greedy";
    case Method::LocalSearch: return "local";
    case Method::BruteForce: return "brute";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "exact") return Method::Exact;
  if (name == "greedy") return Method::Greedy;
  if (name == "local" || name == "local-search") return Method::LocalSearch;
  if (name == "brute" || name == "brute-force") return Method::BruteForce;
  return std::nullopt;
}

void validate_config(const SolverConfig& config) {
  if (!(config.time_limit_s > 0)) throw std::invalid_argument("time limit must be positive");
  if (config.node_limit <= 0) throw std::invalid_argument("node limit must be positive");
  if (config.variable_cap == 0) throw std::invalid_argument("variable cap must be positive");
  const Rational& e = config.link.epsilon;
  if (e <= Rational(0) || e > Rational(1)) throw std::invalid_argument("link epsilon must lie in (0, 1]");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitReached: return "limit-reached";
  }
  return "?";
}

}  // namespace cachesched
