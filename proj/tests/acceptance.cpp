#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cachesched/cli.hpp"
#include "cachesched/evaluator.hpp"
#include "cachesched/instance_io.hpp"
#include "cachesched/qkp_scheduler.hpp"
#include "cachesched/schedule_io.hpp"
#include "cachesched/weight_flow.hpp"
#include "support/instances.hpp"

using namespace cachesched;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return pass;
}

bool criterion1() {
  const auto t0 = Clock::now();
  const auto inst = load_instance(testing::fixture_path("worked_instance.json"));
  const auto p = to_problem(inst);
  const auto r = solve_exact(p, {});
  const double secs = seconds_since(t0);
  bool co_located = r.status == SolveStatus::Optimal;
  for (std::size_t k = 0; k < p.interval_count() && co_located; ++k) {
    const int first = r.assignment.cache_of(p.timeline.present[k].front(), static_cast<int>(k));
    for (int i : p.timeline.present[k]) co_located = co_located && first >= 0 && r.assignment.cache_of(i, static_cast<int>(k)) == first;
  }
  const bool pass = p.timeline.hyper_period == 8 && p.timeline.intervals.boundaries == std::vector<Tick>{0, 4, 8} &&
                    r.objective == 8 && co_located && secs < 1.0;
  return report(1, pass,
                "H=" + std::to_string(p.timeline.hyper_period) + ", intervals=" + std::to_string(p.interval_count()) +
                    ", Z=" + std::to_string(r.objective) + ", co-located=" + (co_located ? "yes" : "no") +
                    ", " + std::to_string(secs) + " s");
}

struct SweepCase {
  CacheProblem problem;
  SolverConfig config;
  SolveResult exact, brute, greedy, local;
};

std::vector<SweepCase> sweep;
double sweep_seconds = 0;

bool criterion2() {
  std::mt19937_64 rng(20240601);
  int mismatches = 0;
  double solve_secs = 0;
  for (int n = 0; n < 240; ++n) {
    SweepCase c{testing::random_small_problem(rng, 50'000), {}, {}, {}, {}, {}};
    if (n % 2 == 1) c.config.link.mode = LinkPolicy::Mode::Epsilon;
    c.config.weight_by_interval = n % 5 == 0;
    const auto t0 = Clock::now();
    c.exact = solve_exact(c.problem, c.config);
    c.brute = brute_force(c.problem, c.config);
    solve_secs += seconds_since(t0);
    const bool same_status = (c.exact.status == SolveStatus::Infeasible) == (c.brute.status == SolveStatus::Infeasible);
    if (!same_status || c.exact.status != c.brute.status || c.exact.objective != c.brute.objective) ++mismatches;
    c.greedy = solve_greedy(c.problem, c.config);
    c.local = c.greedy.has_solution() ? local_search(c.problem, c.greedy, c.config) : c.greedy;
    sweep.push_back(std::move(c));
  }
  sweep_seconds = solve_secs;
  return report(2, mismatches == 0 && sweep.size() >= 200 && solve_secs < 60.0,
                std::to_string(sweep.size()) + " instances, " + std::to_string(mismatches) + " exact/brute mismatches, " +
                    std::to_string(solve_secs) + " s");
}

bool criterion3() {
  std::mt19937_64 rng(33);
  long points = 0, mismatches = 0;
  int instances = 0;
  for (int trial = 0; trial < 5000 && instances < 40; ++trial) {
    const auto p = testing::random_small_problem(rng, 1000);
    if (p.slot_count() > 4) continue;
    ++instances;
    SolverConfig cfg;
    if (instances % 2 == 0) cfg.link.mode = LinkPolicy::Mode::Epsilon;
    cfg.weight_by_interval = instances % 3 == 0;
    const auto mdl = build_linearized_model(p, cfg);
    std::vector<std::pair<int, int>> slots;
    for (const Job& j : p.timeline.jobs)
      for (int k : p.timeline.windows.of(j.job_id)) slots.emplace_back(j.job_id, k);
    AssignmentTensor x(p.job_count(), p.cores(), p.interval_count());
    std::function<void(std::size_t)> rec = [&](std::size_t s) {
      if (s == slots.size()) {
        LinearProgram lp = mdl.lp;
        for (const auto& [i, k] : slots)
          for (int c = 0; c < p.cores(); ++c) {
            const double v = x.get(i, c, k) ? 1.0 : 0.0;
            lp.set_bounds(mdl.x(i, k, c), v, v);
          }
        const auto r = solve_lp(lp);
        const bool feasible = cache_constraints_hold(p, x) && complete_weights(p, x, cfg.link).has_value();
        ++points;
        if ((r.status == LpStatus::Optimal) != feasible) {
          ++mismatches;
        } else if (feasible) {
          const double z = static_cast<double>(objective_value(p, x, cfg.weight_by_interval));
          if (std::abs(r.objective - z) > 1e-6) ++mismatches;
        }
        return;
      }
      const auto [i, k] = slots[s];
      for (int c = -1; c < p.cores(); ++c) {
        x.place(i, k, c);
        rec(s + 1);
      }
      x.place(i, k, -1);
    };
    rec(0);
  }
  return report(3, mismatches == 0 && points > 0,
                std::to_string(instances) + " instances, " + std::to_string(points) + " binary points, " +
                    std::to_string(mismatches) + " mismatches");
}

bool criterion4() {
  long outputs = 0, violations = 0;
  for (const auto& c : sweep) {
    for (const SolveResult* r : {&c.exact, &c.brute, &c.greedy, &c.local}) {
      if (!r->has_solution()) continue;
      ++outputs;
      violations += static_cast<long>(check_assignment(c.problem, r->assignment, r->weights, c.config, 1e-6).size());
      violations += static_cast<long>(check_weights(r->weights, c.problem.timeline, c.problem.cores(), 1e-6).size());
    }
  }
  return report(4, violations == 0 && outputs > 0,
                std::to_string(outputs) + " solver outputs, " + std::to_string(violations) + " violations");
}

bool criterion5() {
  std::mt19937_64 rng(5005);
  const std::vector<Tick> menu{2, 4, 5, 8, 10};
  int sets = 0, below = 0, above = 0, lp_wrong = 0, solver_wrong = 0;
  while (sets < 600) {
    TaskSet ts;
    ts.core_count = std::uniform_int_distribution<int>(1, 3)(rng);
    ts.cache_capacity = 1 << 20;
    const int n = std::uniform_int_distribution<int>(ts.core_count, 3 * ts.core_count + 1)(rng);
    for (int i = 0; i < n; ++i) {
      Task t;
      t.id = i;
      t.name = "t" + std::to_string(i);
      t.period = menu[std::uniform_int_distribution<std::size_t>(0, menu.size() - 1)(rng)];
      t.wcet = std::uniform_int_distribution<Tick>(1, t.period)(rng);
      t.wss = 64;
      ts.tasks.push_back(t);
    }
    // Keep the total near the boundary so both sides are exercised.
    if (std::abs(total_utilization(ts) - ts.core_count) > 0.75) continue;
    ++sets;
    const bool fits = utilization_fits(ts);
    (fits ? below : above)++;
    if (temporally_feasible(ts) != fits) ++lp_wrong;
    if (!fits && sets % 4 == 0) {
      const auto p = make_problem(ts, AffinityMatrix(ts.tasks.size()));
      SolverConfig cfg;
      cfg.method = Method::Greedy;
      if (solve(p, cfg).status != SolveStatus::Infeasible) ++solver_wrong;
      cfg.method = Method::Exact;
      if (solve(p, cfg).status != SolveStatus::Infeasible) ++solver_wrong;
    }
  }
  return report(5, lp_wrong == 0 && solver_wrong == 0 && below > 0 && above > 0,
                std::to_string(sets) + " sets (" + std::to_string(below) + " with U<=m, " + std::to_string(above) +
                    " with U>m), " + std::to_string(lp_wrong) + " misclassified by the weight LP, " +
                    std::to_string(solver_wrong) + " U>m sets not reported infeasible by the solvers");
}

bool criterion6() {
  long schedules = 0, failures = 0;
  for (const auto& c : sweep) {
    for (const SolveResult* r : {&c.exact, &c.greedy, &c.local}) {
      if (!r->has_solution()) continue;
      ++schedules;
      const auto s = build_schedule(c.problem, r->assignment, r->weights);
      const auto csv = write_schedule_csv(s, c.problem.task_set, {{"Z", std::to_string(r->objective)}});
      const auto parsed = parse_schedule_csv(csv, c.problem.task_set);
      bool ok = parsed.schedule.slices == s.slices &&
                validate_schedule(parsed.schedule, c.problem.task_set, c.problem.timeline.jobs).empty();
      std::map<int, Rational> executed;
      for (const auto& sl : parsed.schedule.slices) executed[sl.job_id] += sl.end - sl.start;
      for (const Job& j : c.problem.timeline.jobs) ok = ok && executed[j.job_id] == Rational(j.wcet);
      if (!ok) ++failures;
    }
  }
  return report(6, failures == 0 && schedules > 0,
                std::to_string(schedules) + " schedules round-tripped, " + std::to_string(failures) + " failures");
}

bool criterion7() {
  int compared = 0, violations = 0, ratio_count = 0;
  double ratio_sum = 0;
  for (const auto& c : sweep) {
    if (!c.exact.has_solution() || !c.greedy.has_solution()) continue;
    ++compared;
    const double bound = c.exact.upper_bound.value_or(-1);
    if (!(c.greedy.objective <= c.local.objective && c.local.objective <= c.exact.objective &&
          static_cast<double>(c.exact.objective) <= bound + 1e-6))
      ++violations;
    if (c.exact.objective > 0) {
      ratio_sum += static_cast<double>(c.greedy.objective) / static_cast<double>(c.exact.objective);
      ++ratio_count;
    }
  }
  const double mean = ratio_count ? ratio_sum / ratio_count : 1.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", mean);
  return report(7, violations == 0 && compared > 0,
                std::to_string(compared) + " instances, " + std::to_string(violations) +
                    " ordering violations, mean greedy/exact ratio " + buf + " over " + std::to_string(ratio_count) +
                    " instances with Z*>0");
}

bool criterion8() {
  auto run = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  const std::string worked = testing::fixture_path("worked_instance.json");
  int runs = 0, differ = 0;
  std::vector<std::vector<std::string>> commands;
  for (const std::string solver : {"exact", "greedy", "local", "brute"}) {
    commands.push_back({"cachesched", "solve", worked, "--solver", solver, "--seed", "3"});
    commands.push_back({"cachesched", "solve", worked, "--solver", solver, "--epsilon-link", "--format", "summary"});
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GeneratorSpec spec;
    spec.task_count = 4;
    spec.target_utilization = 1.1;
    spec.periods = {4, 8};
    spec.seed = seed;
    const std::string path = std::string(CACHESCHED_BINARY_DIR) + "/acceptance_gen_" + std::to_string(seed) + ".json";
    if (std::FILE* f = std::fopen(path.c_str(), "w")) {
      const auto text = write_instance(generate_task_set(spec));
      std::fwrite(text.data(), 1, text.size(), f);
      std::fclose(f);
    }
    commands.push_back({"cachesched", "solve", path, "--solver", "local", "--seed", std::to_string(seed)});
    commands.push_back({"cachesched", "solve", path, "--solver", "exact"});
  }
  for (const auto& cmd : commands) {
    ++runs;
    if (run(cmd) != run(cmd)) ++differ;
  }
  return report(8, differ == 0, std::to_string(runs) + " command lines run twice, " + std::to_string(differ) +
                                    " differing outputs");
}

}  // namespace

int main() {
  bool ok = true;
  for (auto* criterion : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8}) {
    try {
      ok = criterion() && ok;
    } catch (const std::exception& e) {
      std::printf("criterion error: %s\n", e.what());
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
