#include "cachesched/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cachesched/weight_flow.hpp"

namespace cachesched {

std::int64_t objective_value(const CacheProblem& problem, const AssignmentTensor& assignment, bool weight_by_interval) {
  const auto& tl = problem.timeline;
  std::int64_t z = 0;
  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    const auto& present = tl.present[k];
    const std::int64_t factor = weight_by_interval ? tl.intervals.duration(k) : 1;
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        const std::int64_t aff = problem.pair_affinity(present[a], present[b]);
        if (aff == 0) continue;
        for (int j = 0; j < assignment.cache_count(); ++j) {
          if (assignment.get(present[a], j, static_cast<int>(k)) && assignment.get(present[b], j, static_cast<int>(k)))
            z += aff * factor;
        }
      }
    }
  }
  return z;
}

std::int64_t ideal_objective(const CacheProblem& problem, bool weight_by_interval) {
  const auto& tl = problem.timeline;
  std::int64_t z = 0;
  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    const auto& present = tl.present[k];
    const std::int64_t factor = weight_by_interval ? tl.intervals.duration(k) : 1;
    for (std::size_t a = 0; a < present.size(); ++a)
      for (std::size_t b = a + 1; b < present.size(); ++b) z += problem.pair_affinity(present[a], present[b]) * factor;
  }
  return z;
}

const char* to_string(AssignmentRule rule) {
  switch (rule) {
    case AssignmentRule::CacheCapacity: return "cache-capacity";
    case AssignmentRule::SingleCache: return "single-cache";
    case AssignmentRule::OutsideWindow: return "outside-window";
    case AssignmentRule::LinkUnassigned: return "link-unassigned";
    case AssignmentRule::LinkEpsilon: return "link-epsilon";
    case AssignmentRule::CoreCapacity: return "core-capacity";
    case AssignmentRule::Weights: return "weights";
  }
  return "?";
}

std::string AssignmentViolation::describe() const {
  std::ostringstream os;
  os << to_string(rule);
  if (job >= 0) os << " job=" << job;
  if (cache >= 0) os << " cache=" << cache;
  if (interval >= 0) os << " interval=" << interval;
  os << " amount=" << amount;
  if (!detail.empty()) os << " (" << detail << ")";
  return os.str();
}

std::vector<AssignmentViolation> check_assignment(const CacheProblem& problem, const AssignmentTensor& assignment,
                                                  const WeightMatrix& weights, const SolverConfig& config,
                                                  double tolerance) {
  std::vector<AssignmentViolation> out;
  const auto& tl = problem.timeline;
  const int m = problem.cores();
  const int n_int = static_cast<int>(tl.intervals.size());

  for (const Job& job : tl.jobs) {
    for (int k = 0; k < n_int; ++k) {
      const int cnt = assignment.assigned_count(job.job_id, k);
      const bool inside = tl.windows.contains(job.job_id, k);
      if (!inside) {
        if (cnt > 0) out.push_back({AssignmentRule::OutsideWindow, job.job_id, assignment.cache_of(job.job_id, k), k, 1.0, {}});
        continue;
      }
      if (cnt > 1) out.push_back({AssignmentRule::SingleCache, job.job_id, -1, k, static_cast<double>(cnt), {}});
      const double w = weights.at(job.job_id, k).to_double();
      if (cnt == 0 && w > tolerance) out.push_back({AssignmentRule::LinkUnassigned, job.job_id, -1, k, w, {}});
      if (cnt > 0 && config.link.mode == LinkPolicy::Mode::Epsilon) {
        const double eps = config.link.epsilon.to_double();
        if (w < eps - tolerance) out.push_back({AssignmentRule::LinkEpsilon, job.job_id, -1, k, eps - w, {}});
      }
    }
  }

  for (int k = 0; k < n_int; ++k) {
    for (int j = 0; j < m; ++j) {
      std::int64_t wss = 0;
      double load = 0;
      for (int i : tl.present[static_cast<std::size_t>(k)]) {
        if (!assignment.get(i, j, k)) continue;
        wss += problem.wss_of_job(i);
        load += weights.at(i, k).to_double();
      }
      if (wss > problem.capacity())
        out.push_back({AssignmentRule::CacheCapacity, -1, j, k, static_cast<double>(wss - problem.capacity()), {}});
      if (load > 1 + tolerance) out.push_back({AssignmentRule::CoreCapacity, -1, j, k, load - 1, {}});
    }
  }

  for (const auto& v : check_weights(weights, tl, m, tolerance))
    out.push_back({AssignmentRule::Weights, v.job, -1, v.interval, v.slack, v.describe()});
  return out;
}

bool cache_constraints_hold(const CacheProblem& problem, const AssignmentTensor& assignment) {
  const auto& tl = problem.timeline;
  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    for (int j = 0; j < problem.cores(); ++j) {
      std::int64_t wss = 0;
      for (int i : tl.present[k])
        if (assignment.get(i, j, static_cast<int>(k))) wss += problem.wss_of_job(i);
      if (wss > problem.capacity()) return false;
    }
    for (int i : tl.present[k])
      if (assignment.assigned_count(i, static_cast<int>(k)) > 1) return false;
  }
  return true;
}

std::optional<EvaluatedAssignment> evaluate_assignment(const CacheProblem& problem, const AssignmentTensor& assignment,
                                                       const SolverConfig& config) {
  if (!cache_constraints_hold(problem, assignment)) return std::nullopt;
  auto weights = complete_weights(problem, assignment, config.link);
  if (!weights) return std::nullopt;
  EvaluatedAssignment out{assignment, std::move(*weights), 0};
  const auto& tl = problem.timeline;
  for (const Job& job : tl.jobs)
    for (int k : tl.windows.of(job.job_id))
      if (out.weights.at(job.job_id, k).is_zero()) out.assignment.place(job.job_id, k, -1);
  out.objective = objective_value(problem, out.assignment, config.weight_by_interval);
  return out;
}

std::vector<std::int64_t> peak_cache_occupancy(const CacheProblem& problem, const AssignmentTensor& assignment) {
  const auto& tl = problem.timeline;
  std::vector<std::int64_t> peak(static_cast<std::size_t>(problem.cores()), 0);
  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    for (int j = 0; j < problem.cores(); ++j) {
      std::int64_t wss = 0;
      for (int i : tl.present[k])
        if (assignment.get(i, j, static_cast<int>(k))) wss += problem.wss_of_job(i);
      peak[static_cast<std::size_t>(j)] = std::max(peak[static_cast<std::size_t>(j)], wss);
    }
  }
  return peak;
}

}  // namespace cachesched
