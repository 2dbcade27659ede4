#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <tuple>

#include "cachesched/qkp_scheduler.hpp"

namespace cachesched {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CacheState {
  std::int64_t free_bytes;
  Rational free_share;
};

}  // namespace

SolveResult solve_greedy(const CacheProblem& problem, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& tl = problem.timeline;
  const int m = problem.cores();
  SolveResult result;
  result.assignment = AssignmentTensor(tl.jobs.size(), m, tl.intervals.size());
  result.weights = fluid_weights(tl);
  auto finish = [&](SolveStatus status, std::string message) {
    result.status = status;
    result.message = std::move(message);
    if (status == SolveStatus::Feasible)
      result.objective = objective_value(problem, result.assignment, config.weight_by_interval);
    result.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };

  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    const int ki = static_cast<int>(k);
    const auto& present = tl.present[k];
    std::vector<CacheState> caches(static_cast<std::size_t>(m), CacheState{problem.capacity(), Rational(1)});
    auto fits = [&](int job, int cache) {
      const auto& c = caches[static_cast<std::size_t>(cache)];
      return problem.wss_of_job(job) <= c.free_bytes && result.weights.at(job, ki) <= c.free_share;
    };
    auto put = [&](int job, int cache) {
      auto& c = caches[static_cast<std::size_t>(cache)];
      c.free_bytes -= problem.wss_of_job(job);
      c.free_share -= result.weights.at(job, ki);
      result.assignment.place(job, ki, cache);
    };

    struct Pair {
      std::int64_t affinity;
      std::int64_t wss;
      std::size_t index;
      int a, b;
    };
    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < present.size(); ++a)
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        const std::int64_t aff = problem.pair_affinity(present[a], present[b]);
        if (aff > 0)
          pairs.push_back({aff, problem.wss_of_job(present[a]) + problem.wss_of_job(present[b]), pairs.size(), present[a],
                           present[b]});
      }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
      return std::tie(r.affinity, l.wss, l.index) < std::tie(l.affinity, r.wss, r.index);
    });

    for (const Pair& p : pairs) {
      const int ca = result.assignment.cache_of(p.a, ki);
      const int cb = result.assignment.cache_of(p.b, ki);
      if (ca >= 0 && cb >= 0) continue;
      if (ca < 0 && cb < 0) {
        for (int j = 0; j < m; ++j) {
          auto& c = caches[static_cast<std::size_t>(j)];
          if (problem.wss_of_job(p.a) + problem.wss_of_job(p.b) <= c.free_bytes &&
              result.weights.at(p.a, ki) + result.weights.at(p.b, ki) <= c.free_share) {
            put(p.a, j);
            put(p.b, j);
            break;
          }
        }
      } else if (ca >= 0) {
        if (fits(p.b, ca)) put(p.b, ca);
      } else if (fits(p.a, cb)) {
        put(p.a, cb);
      }
    }

    // Remaining jobs by decreasing WSS, each to the fitting cache with the
    // most free bytes.
    std::vector<int> rest;
    for (int i : present)
      if (result.assignment.cache_of(i, ki) < 0) rest.push_back(i);
    std::stable_sort(rest.begin(), rest.end(),
                     [&](int l, int r) { return problem.wss_of_job(l) > problem.wss_of_job(r); });
    for (int i : rest) {
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (!fits(i, j)) continue;
        if (best < 0 || caches[static_cast<std::size_t>(j)].free_bytes > caches[static_cast<std::size_t>(best)].free_bytes)
          best = j;
      }
      if (best < 0)
        return finish(SolveStatus::Infeasible,
                      "greedy: job " + std::to_string(i) + " fits no cache on interval " + std::to_string(k));
      put(i, best);
    }
  }
  return finish(SolveStatus::Feasible, {});
}

SolveResult local_search(const CacheProblem& problem, const SolveResult& start, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult result = start;
  result.trace.assign(1, start.objective);
  result.moves = 0;
  if (!start.has_solution()) {
    result.message = "local search: no feasible start";
    return result;
  }
  const auto& tl = problem.timeline;
  const int m = problem.cores();

  // Neighborhood: relocations (job, interval, target cache) and swaps
  // (job, job, interval), scanned in a seed-dependent fixed order.
  struct Move {
    int kind;  // 0 relocate, 1 swap
    int a, b, interval;
  };
  std::vector<Move> moves;
  for (std::size_t k = 0; k < tl.intervals.size(); ++k) {
    const auto& present = tl.present[k];
    for (int i : present)
      for (int j = 0; j < m; ++j) moves.push_back({0, i, j, static_cast<int>(k)});
    for (std::size_t a = 0; a < present.size(); ++a)
      for (std::size_t b = a + 1; b < present.size(); ++b) moves.push_back({1, present[a], present[b], static_cast<int>(k)});
  }
  if (config.seed != 0) {
    std::mt19937_64 rng(config.seed);
    std::shuffle(moves.begin(), moves.end(), rng);
  }

  bool improved = true;
  while (improved && elapsed_s(t0) <= config.time_limit_s) {
    improved = false;
    for (const Move& mv : moves) {
      AssignmentTensor cand = result.assignment;
      if (mv.kind == 0) {
        if (cand.cache_of(mv.a, mv.interval) == mv.b) continue;
        cand.place(mv.a, mv.interval, mv.b);
      } else {
        const int ca = cand.cache_of(mv.a, mv.interval);
        const int cb = cand.cache_of(mv.b, mv.interval);
        if (ca < 0 || cb < 0 || ca == cb) continue;
        cand.place(mv.a, mv.interval, cb);
        cand.place(mv.b, mv.interval, ca);
      }
      // The raw objective bounds the post-pass objective from above.
      if (objective_value(problem, cand, config.weight_by_interval) <= result.objective) continue;
      auto eval = evaluate_assignment(problem, cand, config);
      if (!eval || eval->objective <= result.objective) continue;
      result.assignment = std::move(eval->assignment);
      result.weights = std::move(eval->weights);
      result.objective = eval->objective;
      result.trace.push_back(result.objective);
      ++result.moves;
      improved = true;
      break;
    }
  }
  if (improved) result.message = "local search stopped by time limit";
  result.status = start.status == SolveStatus::Optimal ? SolveStatus::Optimal : SolveStatus::Feasible;
  result.runtime_ms = start.runtime_ms +
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SolveResult solve(const CacheProblem& problem, const SolverConfig& config) {
  validate_config(config);
  switch (config.method) {
    case Method::Exact: return solve_exact(problem, config);
    case Method::Greedy: return solve_greedy(problem, config);
    case Method::LocalSearch: {
      SolveResult start = solve_greedy(problem, config);
      if (start.status != SolveStatus::Feasible) return start;
      return local_search(problem, start, config);
    }
    case Method::BruteForce: return brute_force(problem, config);
  }
  return {};
}

}  // namespace cachesched
