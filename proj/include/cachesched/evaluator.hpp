#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cachesched/instance_io.hpp"
#include "cachesched/qkp_scheduler.hpp"

namespace cachesched {

struct GeneratorSpec {
  int task_count = 4;
  double target_utilization = 1.0;
  int core_count = 2;
  std::int64_t cache_capacity = 32768;
  std::vector<Tick> periods{2, 4, 5, 8, 10, 16, 20};
  std::int64_t wss_min = 1024;
  std::int64_t wss_max = 8192;
  double affinity_density = 0.5;  // probability that a task pair communicates
  int flows_min = 1;
  int flows_max = 3;
  std::uint64_t seed = 1;
};

// Throws ValidationError when the spec cannot be met (utilization above the
// core count or the task count, bad ranges, empty period menu).
void validate_generator_spec(const GeneratorSpec& spec);

// UUniFast utilization split, C_i = round(u_i * P_i) clamped to [1, P_i],
// then trimmed if rounding pushed the total above the core count.
// Deterministic per seed.
Instance generate_task_set(const GeneratorSpec& spec);

struct MethodReport {
  Method method = Method::Exact;
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t objective = 0;
  std::optional<double> bound;
  double gap = 0;  // (bound - Z) / bound, 0 when bound is 0
  double runtime_ms = 0;
  long migrations = 0;
  std::vector<std::int64_t> peak_occupancy;  // per cache
  double capture_ratio = 1;                  // Z / ideal Z, 1 when ideal is 0
  std::vector<std::string> violations;
  std::string error;

  bool succeeded() const { return error.empty() && (status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
                                                    status == SolveStatus::LimitReached); }
};

struct ComparisonReport {
  std::int64_t ideal_objective = 0;
  std::optional<double> bound;  // best proven bound used for gaps
  std::vector<MethodReport> rows;
};

// Runs every method under the same config. A method that throws is
// recorded with its error; the others still run.
ComparisonReport compare_solvers(const CacheProblem& problem, const std::vector<Method>& methods,
                                 const SolverConfig& config);

// CSV: method,Z,bound,gap,runtime_ms,migrations,status,peak_wss,capture_ratio
std::string write_comparison_csv(const ComparisonReport& report);

}  // namespace cachesched
