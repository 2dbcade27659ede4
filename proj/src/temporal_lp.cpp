#include "cachesched/temporal_lp.hpp"

#include <cmath>
#include <sstream>

namespace cachesched {

WeightLp build_weight_lp(const JobTimeline& timeline, int core_count) {
  WeightLp out;
  const std::size_t n_int = timeline.intervals.size();
  std::vector<std::vector<LinearTerm>> per_interval(n_int);
  std::vector<std::vector<LinearTerm>> per_job(timeline.jobs.size());

  for (const Job& job : timeline.jobs) {
    for (int k : timeline.windows.of(job.job_id)) {
      const int v = out.lp.add_variable(0.0, 1.0);
      out.slot_of_var.emplace_back(job.job_id, k);
      per_interval[static_cast<std::size_t>(k)].push_back({v, 1.0});
      per_job[static_cast<std::size_t>(job.job_id)].push_back(
          {v, static_cast<double>(timeline.intervals.duration(static_cast<std::size_t>(k)))});
    }
  }
  for (std::size_t k = 0; k < n_int; ++k) {
    out.capacity_rows.push_back(out.lp.add_constraint(std::move(per_interval[k]), Relation::LessEqual,
                                                      static_cast<double>(core_count),
                                                      "capacity[" + std::to_string(k) + "]"));
  }
  for (const Job& job : timeline.jobs) {
    out.completion_rows.push_back(out.lp.add_constraint(std::move(per_job[static_cast<std::size_t>(job.job_id)]),
                                                        Relation::Equal, static_cast<double>(job.wcet),
                                                        "completion[" + std::to_string(job.job_id) + "]"));
  }
  return out;
}

WeightMatrix weights_from_lp(const WeightLp& model, const LpOutcome& outcome, const JobTimeline& timeline,
                             std::int64_t max_den) {
  WeightMatrix w(timeline.jobs.size(), timeline.intervals.size());
  if (outcome.status != LpStatus::Optimal) return w;
  for (std::size_t v = 0; v < model.slot_of_var.size(); ++v) {
    auto [job, k] = model.slot_of_var[v];
    w.set(job, k, Rational::approximate(outcome.values[v], max_den));
  }
  return w;
}

WeightMatrix fluid_weights(const JobTimeline& timeline) {
  WeightMatrix w(timeline.jobs.size(), timeline.intervals.size());
  for (const Job& job : timeline.jobs) {
    const Rational rate(job.wcet, job.period());
    for (int k : timeline.windows.of(job.job_id)) w.set(job.job_id, k, rate);
  }
  return w;
}

const char* to_string(WeightRule rule) {
  switch (rule) {
    case WeightRule::IntervalCapacity: return "interval-capacity";
    case WeightRule::WeightBounds: return "weight-bounds";
    case WeightRule::Completion: return "completion";
    case WeightRule::OutsideWindow: return "outside-window";
  }
  return "?";
}

std::string WeightViolation::describe() const {
  std::ostringstream os;
  os << to_string(rule);
  if (job >= 0) os << " job=" << job;
  if (interval >= 0) os << " interval=" << interval;
  os << " slack=" << slack;
  return os.str();
}

std::vector<WeightViolation> check_weights(const WeightMatrix& weights, const JobTimeline& timeline, int core_count,
                                           double tolerance) {
  std::vector<WeightViolation> out;
  const std::size_t n_int = timeline.intervals.size();
  std::vector<double> load(n_int, 0.0);

  for (const Job& job : timeline.jobs) {
    double executed = 0;
    for (std::size_t k = 0; k < n_int; ++k) {
      const double w = weights.at(job.job_id, static_cast<int>(k)).to_double();
      const bool inside = timeline.windows.contains(job.job_id, static_cast<int>(k));
      if (!inside) {
        if (std::fabs(w) > tolerance) out.push_back({WeightRule::OutsideWindow, job.job_id, static_cast<int>(k), w});
        continue;
      }
      if (w < -tolerance) out.push_back({WeightRule::WeightBounds, job.job_id, static_cast<int>(k), w});
      if (w > 1 + tolerance) out.push_back({WeightRule::WeightBounds, job.job_id, static_cast<int>(k), 1 - w});
      load[k] += w;
      executed += w * static_cast<double>(timeline.intervals.duration(k));
    }
    const double miss = executed - static_cast<double>(job.wcet);
    if (std::fabs(miss) > tolerance) out.push_back({WeightRule::Completion, job.job_id, -1, miss});
  }
  for (std::size_t k = 0; k < n_int; ++k) {
    if (load[k] > core_count + tolerance)
      out.push_back({WeightRule::IntervalCapacity, -1, static_cast<int>(k), core_count - load[k]});
  }
  return out;
}

bool temporally_feasible(const TaskSet& task_set) {
  const JobTimeline tl = build_timeline(task_set);
  const WeightLp model = build_weight_lp(tl, task_set.core_count);
  return solve_lp(model.lp).status == LpStatus::Optimal;
}

}  // namespace cachesched
