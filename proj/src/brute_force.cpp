#include <chrono>
#include <limits>

#include "cachesched/errors.hpp"
#include "cachesched/qkp_scheduler.hpp"

namespace cachesched {

std::uint64_t brute_force_space(const CacheProblem& problem) {
  const auto base = static_cast<std::uint64_t>(problem.cores()) + 1;
  std::uint64_t space = 1;
  for (std::size_t s = 0; s < problem.slot_count(); ++s) {
    if (space > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    space *= base;
  }
  return space;
}

namespace {

// Depth-first enumeration of every slot choice {none, cache 0..m-1}, slots
// ordered by (interval, job). Branches that already break the L1 capacity,
// or leave a job with no cache anywhere in its window, are cut: no choice
// of the remaining slots can make them feasible.
class Enumerator {
 public:
  Enumerator(const CacheProblem& problem, const SolverConfig& config)
      : problem_(problem),
        config_(config),
        x_(problem.job_count(), problem.cores(), problem.interval_count()),
        used_(problem.interval_count() * static_cast<std::size_t>(problem.cores()), 0),
        assigned_slots_(problem.job_count(), 0) {
    const auto& tl = problem.timeline;
    for (std::size_t k = 0; k < tl.intervals.size(); ++k)
      for (int i : tl.present[k]) slots_.push_back({i, static_cast<int>(k)});
    last_slot_.assign(problem.job_count(), -1);
    for (std::size_t s = 0; s < slots_.size(); ++s) last_slot_[static_cast<std::size_t>(slots_[s].job)] = static_cast<int>(s);
  }

  void run() { recurse(0); }

  std::optional<EvaluatedAssignment> best;
  long leaves = 0;
  long weight_checks = 0;

 private:
  struct Slot {
    int job;
    int interval;
  };

  void recurse(std::size_t s) {
    if (s == slots_.size()) {
      ++leaves;
      // Post-pass objective never exceeds the raw one; skip hopeless leaves.
      const std::int64_t raw = objective_value(problem_, x_, config_.weight_by_interval);
      if (best && raw <= best->objective) return;
      ++weight_checks;
      auto eval = evaluate_assignment(problem_, x_, config_);
      if (eval && (!best || eval->objective > best->objective)) best = std::move(eval);
      return;
    }
    const Slot slot = slots_[s];
    const bool last = last_slot_[static_cast<std::size_t>(slot.job)] == static_cast<int>(s);
    const std::int64_t wss = problem_.wss_of_job(slot.job);

    if (!last || assigned_slots_[static_cast<std::size_t>(slot.job)] > 0) recurse(s + 1);
    for (int j = 0; j < problem_.cores(); ++j) {
      auto& used = used_[static_cast<std::size_t>(slot.interval) * static_cast<std::size_t>(problem_.cores()) +
                         static_cast<std::size_t>(j)];
      if (used + wss > problem_.capacity()) continue;
      used += wss;
      ++assigned_slots_[static_cast<std::size_t>(slot.job)];
      x_.set(slot.job, j, slot.interval, true);
      recurse(s + 1);
      x_.set(slot.job, j, slot.interval, false);
      --assigned_slots_[static_cast<std::size_t>(slot.job)];
      used -= wss;
    }
  }

  const CacheProblem& problem_;
  const SolverConfig& config_;
  AssignmentTensor x_;
  std::vector<std::int64_t> used_;
  std::vector<int> assigned_slots_;
  std::vector<Slot> slots_;
  std::vector<int> last_slot_;
};

}  // namespace

SolveResult brute_force(const CacheProblem& problem, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t space = brute_force_space(problem);
  if (space > config.brute_force_cap)
    throw GuardError("brute-force search space " + std::to_string(space) + " exceeds cap " +
                     std::to_string(config.brute_force_cap));
  Enumerator e(problem, config);
  e.run();
  SolveResult r;
  r.nodes = e.leaves;
  r.lp_solves = e.weight_checks;
  if (e.best) {
    r.status = SolveStatus::Optimal;
    r.assignment = std::move(e.best->assignment);
    r.weights = std::move(e.best->weights);
    r.objective = e.best->objective;
    r.upper_bound = static_cast<double>(r.objective);
  } else {
    r.status = SolveStatus::Infeasible;
    r.message = "no assignment admits feasible weights";
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cachesched
