#pragma once

#include <cstdint>

#include "cachesched/assignment.hpp"
#include "cachesched/linearized_model.hpp"
#include "cachesched/problem.hpp"

namespace cachesched {

// Branch-and-bound over the x variables of the linearized model, bounded by
// its LP relaxation and seeded with the greedy incumbent. upper_bound is
// the root relaxation value.
SolveResult solve_exact(const CacheProblem& problem, const SolverConfig& config);
SolveResult solve_exact(const CacheProblem& problem, const LinearizedModel& model, const SolverConfig& config);

// Interval-by-interval pair packing with fluid weights.
SolveResult solve_greedy(const CacheProblem& problem, const SolverConfig& config);

// First-improvement hill climbing over relocate and swap moves.
SolveResult local_search(const CacheProblem& problem, const SolveResult& start, const SolverConfig& config);

// (m + 1)^(number of job-interval slots), saturated at UINT64_MAX.
std::uint64_t brute_force_space(const CacheProblem& problem);

// Exhaustive enumeration; throws GuardError above config.brute_force_cap.
SolveResult brute_force(const CacheProblem& problem, const SolverConfig& config);

// Runs config.method (local search starts from greedy).
SolveResult solve(const CacheProblem& problem, const SolverConfig& config);

}  // namespace cachesched
