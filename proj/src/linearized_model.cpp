#include "cachesched/linearized_model.hpp"

#include <cmath>
#include <string>

#include "cachesched/errors.hpp"

namespace cachesched {

namespace {

std::size_t product_count(const CacheProblem& problem) {
  std::size_t n = 0;
  for (const auto& present : problem.timeline.present)
    for (std::size_t a = 0; a < present.size(); ++a)
      for (std::size_t b = a + 1; b < present.size(); ++b)
        if (problem.pair_affinity(present[a], present[b]) > 0) n += static_cast<std::size_t>(problem.cores());
  return n;
}

}  // namespace

AssignmentTensor LinearizedModel::assignment_from(const std::vector<double>& values) const {
  AssignmentTensor x(jobs, caches, intervals);
  for (std::size_t i = 0; i < jobs; ++i)
    for (std::size_t k = 0; k < intervals; ++k)
      for (int j = 0; j < caches; ++j) {
        const int v = this->x(static_cast<int>(i), static_cast<int>(k), j);
        if (v >= 0 && values[static_cast<std::size_t>(v)] > 0.5) x.set(static_cast<int>(i), j, static_cast<int>(k), true);
      }
  return x;
}

std::size_t linearized_variable_count(const CacheProblem& problem) {
  const std::size_t slots = problem.slot_count();
  const auto m = static_cast<std::size_t>(problem.cores());
  // x and w_ijk per (slot, cache), w per slot, products.
  return slots * m * 2 + slots + product_count(problem);
}

LinearizedModel build_linearized_model(const CacheProblem& problem, const SolverConfig& config) {
  const std::size_t needed = linearized_variable_count(problem);
  if (needed > config.variable_cap)
    throw GuardError("linearized model needs " + std::to_string(needed) + " variables, cap is " +
                     std::to_string(config.variable_cap));

  const auto& tl = problem.timeline;
  const int m = problem.cores();
  LinearizedModel mdl;
  mdl.jobs = tl.jobs.size();
  mdl.intervals = tl.intervals.size();
  mdl.caches = m;
  mdl.x_var.assign(mdl.jobs * mdl.intervals * static_cast<std::size_t>(m), -1);
  mdl.wc_var.assign(mdl.x_var.size(), -1);
  mdl.w_var.assign(mdl.jobs * mdl.intervals, -1);
  LinearProgram& lp = mdl.lp;
  lp.set_sense(Sense::Maximize);

  auto xi = [&](int i, int k, int j) -> int& {
    return mdl.x_var[(static_cast<std::size_t>(i) * mdl.intervals + static_cast<std::size_t>(k)) * static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(j)];
  };
  auto wci = [&](int i, int k, int j) -> int& {
    return mdl.wc_var[(static_cast<std::size_t>(i) * mdl.intervals + static_cast<std::size_t>(k)) * static_cast<std::size_t>(m) +
                      static_cast<std::size_t>(j)];
  };

  for (const Job& job : tl.jobs) {
    for (int k : tl.windows.of(job.job_id)) {
      for (int j = 0; j < m; ++j) {
        xi(job.job_id, k, j) = lp.add_variable(0.0, 1.0);
        mdl.x_vars.push_back(xi(job.job_id, k, j));
      }
      mdl.w_var[static_cast<std::size_t>(job.job_id) * mdl.intervals + static_cast<std::size_t>(k)] = lp.add_variable(0.0, 1.0);
      for (int j = 0; j < m; ++j) wci(job.job_id, k, j) = lp.add_variable(0.0, 1.0);
    }
  }

  for (std::size_t k = 0; k < mdl.intervals; ++k) {
    const auto& present = tl.present[k];
    const std::int64_t factor = config.weight_by_interval ? tl.intervals.duration(k) : 1;
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        const std::int64_t aff = problem.pair_affinity(present[a], present[b]);
        if (aff <= 0) continue;
        for (int j = 0; j < m; ++j) {
          const std::int64_t coef = aff * factor;
          const int y = lp.add_variable(0.0, 1.0, static_cast<double>(coef));
          mdl.products.push_back(ProductVar{present[a], present[b], j, static_cast<int>(k), y, coef});
          const int xa = xi(present[a], static_cast<int>(k), j);
          const int xb = xi(present[b], static_cast<int>(k), j);
          lp.add_constraint({{y, 1.0}, {xa, -1.0}}, Relation::LessEqual, 0.0, "mccormick_a");
          lp.add_constraint({{y, 1.0}, {xb, -1.0}}, Relation::LessEqual, 0.0, "mccormick_b");
          lp.add_constraint({{xa, 1.0}, {xb, 1.0}, {y, -1.0}}, Relation::LessEqual, 1.0, "mccormick_ab");
          mdl.mccormick_rows += 3;
        }
      }
    }
  }

  // Cache capacity and per-core interval capacity, per (cache, interval).
  for (std::size_t k = 0; k < mdl.intervals; ++k) {
    const auto& present = tl.present[k];
    for (int j = 0; j < m; ++j) {
      std::vector<LinearTerm> wss_row, core_row;
      for (int i : present) {
        wss_row.push_back({xi(i, static_cast<int>(k), j), static_cast<double>(problem.wss_of_job(i))});
        core_row.push_back({wci(i, static_cast<int>(k), j), 1.0});
      }
      lp.add_constraint(std::move(wss_row), Relation::LessEqual, static_cast<double>(problem.capacity()), "cache_capacity");
      ++mdl.cache_capacity_rows;
      lp.add_constraint(std::move(core_row), Relation::LessEqual, 1.0, "core_capacity");
      ++mdl.core_capacity_rows;
    }
  }

  const bool epsilon = config.link.mode == LinkPolicy::Mode::Epsilon;
  const double eps = config.link.epsilon.to_double();
  for (const Job& job : tl.jobs) {
    for (int k : tl.windows.of(job.job_id)) {
      const int w = mdl.w(job.job_id, k);
      std::vector<LinearTerm> single, split{{w, -1.0}}, link{{w, 1.0}};
      for (int j = 0; j < m; ++j) {
        const int x = xi(job.job_id, k, j);
        const int wc = wci(job.job_id, k, j);
        single.push_back({x, 1.0});
        split.push_back({wc, 1.0});
        link.push_back({x, -1.0});
        lp.add_constraint({{wc, 1.0}, {x, -1.0}}, Relation::LessEqual, 0.0, "core_link");
        ++mdl.link_rows;
      }
      lp.add_constraint(std::move(single), Relation::LessEqual, 1.0, "single_cache");
      ++mdl.single_cache_rows;
      lp.add_constraint(std::move(split), Relation::Equal, 0.0, "split");
      ++mdl.split_rows;
      lp.add_constraint(std::move(link), Relation::LessEqual, 0.0, "link");
      ++mdl.link_rows;
      if (epsilon) {
        std::vector<LinearTerm> lower{{w, -1.0}};
        for (int j = 0; j < m; ++j) lower.push_back({xi(job.job_id, k, j), eps});
        lp.add_constraint(std::move(lower), Relation::LessEqual, 0.0, "link_epsilon");
        ++mdl.link_rows;
      }
    }
  }

  // Temporal rows on w[i][k].
  for (std::size_t k = 0; k < mdl.intervals; ++k) {
    std::vector<LinearTerm> row;
    for (int i : tl.present[k]) row.push_back({mdl.w(i, static_cast<int>(k)), 1.0});
    lp.add_constraint(std::move(row), Relation::LessEqual, static_cast<double>(m), "interval_capacity");
    ++mdl.interval_capacity_rows;
  }
  for (const Job& job : tl.jobs) {
    std::vector<LinearTerm> row;
    for (int k : tl.windows.of(job.job_id))
      row.push_back({mdl.w(job.job_id, k), static_cast<double>(tl.intervals.duration(static_cast<std::size_t>(k)))});
    lp.add_constraint(std::move(row), Relation::Equal, static_cast<double>(job.wcet), "completion");
    ++mdl.completion_rows;
  }
  return mdl;
}

}  // namespace cachesched
