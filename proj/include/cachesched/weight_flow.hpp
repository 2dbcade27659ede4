#pragma once

#include <optional>

#include "cachesched/problem.hpp"

namespace cachesched {

// Exact weights for a fixed assignment, or nullopt when no weights satisfy
// completion, per-core interval capacity and the link policy.
//
// The weights are the solution of a transportation problem: job i ships
// C_i ticks to the (cache, interval) slots it is assigned to, each slot
// absorbing at most |I_k| ticks. Integer data gives an integral flow, so
// the weights are exact fractions. Under the one-sided policy the returned
// flow has maximal support: an assigned slot gets zero weight only if every
// feasible weight matrix gives it zero.
std::optional<WeightMatrix> complete_weights(const CacheProblem& problem, const AssignmentTensor& assignment,
                                             const LinkPolicy& link);

}  // namespace cachesched
