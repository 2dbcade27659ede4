#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cachesched/problem.hpp"

namespace cachesched {

// Sum over intervals, caches and unordered co-present job pairs of
// a[i][i'] * x[i][j][k] * x[i'][j][k], optionally weighted by |I_k|.
std::int64_t objective_value(const CacheProblem& problem, const AssignmentTensor& assignment,
                             bool weight_by_interval = false);

// Objective when every job present on an interval shares one cache.
std::int64_t ideal_objective(const CacheProblem& problem, bool weight_by_interval = false);

enum class AssignmentRule {
  CacheCapacity,  // WSS of co-located jobs <= C_L1
  SingleCache,    // each job on at most one cache per interval
  OutsideWindow,  // assignment on an interval where the job is not released
  LinkUnassigned, // positive weight but no cache
  LinkEpsilon,    // assigned but weight below epsilon
  CoreCapacity,   // weights sharing one core on one interval sum to <= 1
  Weights,        // a check_weights failure
};

const char* to_string(AssignmentRule rule);

struct AssignmentViolation {
  AssignmentRule rule;
  int job = -1;
  int cache = -1;
  int interval = -1;
  double amount = 0;
  std::string detail;

  std::string describe() const;
};

std::vector<AssignmentViolation> check_assignment(const CacheProblem& problem, const AssignmentTensor& assignment,
                                                  const WeightMatrix& weights, const SolverConfig& config,
                                                  double tolerance = kCheckTolerance);

// True when every (cache, interval) respects the L1 capacity and every job
// sits on at most one cache per interval.
bool cache_constraints_hold(const CacheProblem& problem, const AssignmentTensor& assignment);

struct EvaluatedAssignment {
  AssignmentTensor assignment;
  WeightMatrix weights;
  std::int64_t objective = 0;
};

// Completes weights for the assignment, clears job-interval assignments
// whose weight is zero, and scores the result. nullopt when the assignment
// violates cache constraints or admits no feasible weights.
std::optional<EvaluatedAssignment> evaluate_assignment(const CacheProblem& problem, const AssignmentTensor& assignment,
                                                       const SolverConfig& config);

// Largest WSS occupancy of each cache over all intervals.
std::vector<std::int64_t> peak_cache_occupancy(const CacheProblem& problem, const AssignmentTensor& assignment);

}  // namespace cachesched
