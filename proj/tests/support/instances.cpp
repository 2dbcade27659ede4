#include "support/instances.hpp"

#include "cachesched/qkp_scheduler.hpp"

namespace cachesched::testing {

TaskSet make_task_set(const std::vector<TaskSpec>& tasks, int cores, std::int64_t capacity) {
  TaskSet ts;
  ts.core_count = cores;
  ts.cache_capacity = capacity;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    ts.tasks.push_back(Task{static_cast<int>(i), "t" + std::to_string(i), tasks[i].period, tasks[i].wcet, tasks[i].wss});
  return ts;
}

AffinityMatrix make_affinity(std::size_t n, const std::vector<std::tuple<int, int, int>>& pairs) {
  AffinityMatrix a(n);
  for (const auto& [i, j, c] : pairs) a.add(i, j, c);
  return a;
}

CacheProblem worked_problem() {
  return make_problem(make_task_set({{4, 2, 8192}, {4, 1, 4096}, {8, 2, 4096}}, 2, 16384),
                      make_affinity(3, {{0, 1, 3}, {0, 2, 1}}));
}

std::string fixture_path(const std::string& name) { return std::string(CACHESCHED_FIXTURES) + "/" + name; }

CacheProblem random_small_problem(std::mt19937_64& rng, std::uint64_t max_space) {
  // Period menus whose hyper-period has at most three intervals.
  static const std::vector<std::vector<Tick>> kMenus = {{4}, {2, 4}, {4, 8}, {3, 6}, {3, 9}, {6, 12}, {6}};
  std::uniform_int_distribution<std::size_t> menu_pick(0, kMenus.size() - 1);
  std::uniform_int_distribution<int> task_pick(2, 4), core_pick(1, 3), aff_pick(0, 3);
  std::uniform_int_distribution<std::int64_t> wss_pick(1, 8);
  for (;;) {
    const auto& menu = kMenus[menu_pick(rng)];
    const int n = task_pick(rng);
    const int m = core_pick(rng);
    std::vector<TaskSpec> specs;
    std::uniform_int_distribution<std::size_t> period_pick(0, menu.size() - 1);
    for (int i = 0; i < n; ++i) {
      const Tick p = menu[period_pick(rng)];
      std::uniform_int_distribution<Tick> c_pick(1, p);
      specs.push_back({p, c_pick(rng), wss_pick(rng) * 1024});
    }
    std::uniform_int_distribution<std::int64_t> cap_pick(8, 20);
    TaskSet ts = make_task_set(specs, m, cap_pick(rng) * 1024);
    if (!validate_task_set(ts).empty() || !utilization_fits(ts)) continue;
    std::vector<std::tuple<int, int, int>> pairs;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (int c = aff_pick(rng); c > 0) pairs.emplace_back(a, b, c);
    CacheProblem p = make_problem(ts, make_affinity(static_cast<std::size_t>(n), pairs));
    if (p.interval_count() > 3 || brute_force_space(p) > max_space) continue;
    return p;
  }
}

}  // namespace cachesched::testing
