#pragma once

#include <cstdint>
#include <vector>

#include "cachesched/linear_program.hpp"
#include "cachesched/problem.hpp"

namespace cachesched {

// Product variable y = x[a][cache][k] * x[b][cache][k] for a co-present
// pair with positive affinity.
struct ProductVar {
  int job_a = 0;
  int job_b = 0;
  int cache = 0;
  int interval = 0;
  int var = 0;
  std::int64_t coef = 0;
};

// The cache-assignment problem with the quadratic objective replaced by
// McCormick product variables, plus the temporal rows and a per-core
// interval capacity. Relaxing integrality of x gives an LP upper bound.
struct LinearizedModel {
  LinearProgram lp;

  std::vector<int> x_var;   // (job, interval, cache) -> var or -1
  std::vector<int> w_var;   // (job, interval) -> var or -1
  std::vector<int> wc_var;  // (job, interval, cache) -> var or -1
  std::vector<ProductVar> products;
  std::vector<int> x_vars;  // all x variables in creation order

  std::size_t jobs = 0;
  std::size_t intervals = 0;
  int caches = 0;

  // Row counts by family.
  int cache_capacity_rows = 0;   // WSS per (cache, interval)
  int single_cache_rows = 0;     // per (job, interval in window)
  int interval_capacity_rows = 0;
  int completion_rows = 0;
  int link_rows = 0;
  int core_capacity_rows = 0;    // per (cache, interval)
  int split_rows = 0;            // sum_j w_ijk = w_ik
  int mccormick_rows = 0;

  int x(int job, int interval, int cache) const {
    return x_var[(static_cast<std::size_t>(job) * intervals + static_cast<std::size_t>(interval)) *
                     static_cast<std::size_t>(caches) +
                 static_cast<std::size_t>(cache)];
  }
  int w(int job, int interval) const {
    return w_var[static_cast<std::size_t>(job) * intervals + static_cast<std::size_t>(interval)];
  }
  int wc(int job, int interval, int cache) const {
    return wc_var[(static_cast<std::size_t>(job) * intervals + static_cast<std::size_t>(interval)) *
                      static_cast<std::size_t>(caches) +
                  static_cast<std::size_t>(cache)];
  }

  // Values of the x variables read back as an assignment (rounded).
  AssignmentTensor assignment_from(const std::vector<double>& values) const;
};

// Variable count the model would have, without building it.
std::size_t linearized_variable_count(const CacheProblem& problem);

// Throws GuardError when the variable count exceeds config.variable_cap.
LinearizedModel build_linearized_model(const CacheProblem& problem, const SolverConfig& config);

}  // namespace cachesched
