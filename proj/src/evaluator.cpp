#include "cachesched/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "cachesched/errors.hpp"
#include "cachesched/schedule.hpp"

namespace cachesched {

void validate_generator_spec(const GeneratorSpec& spec) {
  if (spec.task_count < 1) throw ValidationError("generator: task count must be >= 1");
  if (spec.core_count < 1) throw ValidationError("generator: core count must be >= 1");
  if (!(spec.target_utilization > 0)) throw ValidationError("generator: target utilization must be > 0");
  if (spec.target_utilization > spec.core_count)
    throw ValidationError("generator: target utilization exceeds core count");
  if (spec.target_utilization > spec.task_count)
    throw ValidationError("generator: target utilization exceeds task count (each task has u <= 1)");
  if (spec.periods.empty()) throw ValidationError("generator: empty period menu");
  for (Tick p : spec.periods)
    if (p < 1) throw ValidationError("generator: periods must be >= 1");
  if (spec.wss_min < 0 || spec.wss_max < spec.wss_min) throw ValidationError("generator: bad WSS range");
  if (spec.wss_max > spec.cache_capacity) throw ValidationError("generator: WSS range exceeds L1 capacity");
  if (spec.affinity_density < 0 || spec.affinity_density > 1) throw ValidationError("generator: density outside [0, 1]");
  if (spec.flows_min < 0 || spec.flows_max < spec.flows_min) throw ValidationError("generator: bad flow count range");
}

namespace {

// UUniFast with discard of splits that give some task u > 1.
std::vector<double> uunifast(int n, double total, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> u;
    double sum = total;
    for (int i = 1; i < n; ++i) {
      const double next = sum * std::pow(unit(rng), 1.0 / (n - i));
      u.push_back(sum - next);
      sum = next;
    }
    u.push_back(sum);
    if (std::all_of(u.begin(), u.end(), [](double x) { return x <= 1.0; })) return u;
  }
  throw ValidationError("generator: could not split utilization with every task at most 1");
}

// Largest-utilization task that can still lose a tick, or nullptr.
Task* trimmable(std::vector<Task>& tasks) {
  Task* best = nullptr;
  for (Task& t : tasks) {
    if (t.wcet <= 1) continue;
    if (!best || t.wcet * best->period > best->wcet * t.period) best = &t;
  }
  return best;
}

}  // namespace

Instance generate_task_set(const GeneratorSpec& spec) {
  validate_generator_spec(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick_period(0, spec.periods.size() - 1);
  std::uniform_int_distribution<std::int64_t> pick_wss(spec.wss_min, spec.wss_max);

  Instance inst;
  // Rounding may overshoot the platform: trim the largest-utilization task
  // until the set fits, redrawing when every task is already at one tick.
  for (int attempt = 0;; ++attempt) {
    if (attempt == 100) throw ValidationError("generator: rounded task set cannot fit the core count");
    const std::vector<double> util = uunifast(spec.task_count, spec.target_utilization, rng);
    inst = Instance{};
    inst.task_set.core_count = spec.core_count;
    inst.task_set.cache_capacity = spec.cache_capacity;
    for (int i = 0; i < spec.task_count; ++i) {
      Task t;
      t.id = i;
      t.name = "t" + std::to_string(i);
      t.period = spec.periods[pick_period(rng)];
      t.wcet = std::clamp<Tick>(std::llround(util[static_cast<std::size_t>(i)] * static_cast<double>(t.period)), 1, t.period);
      t.wss = pick_wss(rng);
      inst.manifest.push_back({t.name, {{"data", t.wss / 2}, {"bss", t.wss - t.wss / 2}}});
      inst.task_set.tasks.push_back(std::move(t));
    }
    while (!utilization_fits(inst.task_set)) {
      Task* t = trimmable(inst.task_set.tasks);
      if (!t) break;
      --t->wcet;
    }
    if (utilization_fits(inst.task_set)) break;
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> pick_count(spec.flows_min, spec.flows_max);
  std::bernoulli_distribution direction(0.5);
  for (int a = 0; a < spec.task_count; ++a) {
    for (int b = a + 1; b < spec.task_count; ++b) {
      if (coin(rng) >= spec.affinity_density) continue;
      const int count = pick_count(rng);
      for (int f = 0; f < count; ++f) {
        if (direction(rng))
          inst.flows.push_back({a, b});
        else
          inst.flows.push_back({b, a});
      }
    }
  }
  auto problems = validate_instance(inst);
  if (!problems.empty()) throw ValidationError("generator: " + problems.front());
  return inst;
}

ComparisonReport compare_solvers(const CacheProblem& problem, const std::vector<Method>& methods,
                                 const SolverConfig& config) {
  ComparisonReport report;
  report.ideal_objective = ideal_objective(problem, config.weight_by_interval);
  for (Method method : methods) {
    MethodReport row;
    row.method = method;
    SolverConfig cfg = config;
    cfg.method = method;
    try {
      SolveResult r = solve(problem, cfg);
      row.status = r.status;
      row.runtime_ms = r.runtime_ms;
      if (r.has_solution()) {
        row.objective = r.objective;
        row.peak_occupancy = peak_cache_occupancy(problem, r.assignment);
        row.migrations = build_schedule(problem, r.assignment, r.weights).metrics.migrations;
        for (const auto& v : check_assignment(problem, r.assignment, r.weights, cfg)) row.violations.push_back(v.describe());
        row.capture_ratio = report.ideal_objective == 0
                                ? 1.0
                                : static_cast<double>(r.objective) / static_cast<double>(report.ideal_objective);
      }
      if (method == Method::Exact || method == Method::BruteForce) {
        if (r.status == SolveStatus::Optimal)
          report.bound = static_cast<double>(r.objective);
        else if (r.upper_bound && !report.bound)
          report.bound = r.upper_bound;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  if (!report.bound) {
    // No exact method ran to completion: fall back to the root relaxation.
    try {
      const LinearizedModel model = build_linearized_model(problem, config);
      const LpOutcome root = solve_lp(model.lp);
      if (root.status == LpStatus::Optimal) report.bound = root.objective;
    } catch (const std::exception&) {
    }
  }
  for (auto& row : report.rows) {
    row.bound = report.bound;
    if (report.bound && *report.bound > 0 && row.succeeded())
      row.gap = std::max(0.0, (*report.bound - static_cast<double>(row.objective)) / *report.bound);
  }
  return report;
}

std::string write_comparison_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "method,Z,bound,gap,runtime_ms,migrations,status,peak_wss,capture_ratio\n";
  os << std::setprecision(6) << std::fixed;
  for (const auto& row : report.rows) {
    os << to_string(row.method) << ',';
    if (row.succeeded()) os << row.objective;
    os << ',';
    if (row.bound) os << *row.bound;
    os << ',';
    if (row.succeeded()) os << row.gap;
    os << ',' << std::setprecision(3) << row.runtime_ms << std::setprecision(6) << ',';
    if (row.succeeded()) os << row.migrations;
    os << ',' << (row.error.empty() ? to_string(row.status) : "error") << ',';
    if (row.succeeded()) os << (row.peak_occupancy.empty() ? 0 : *std::max_element(row.peak_occupancy.begin(), row.peak_occupancy.end()));
    os << ',';
    if (row.succeeded()) os << row.capture_ratio;
    os << '\n';
  }
  return os.str();
}

}  // namespace cachesched
