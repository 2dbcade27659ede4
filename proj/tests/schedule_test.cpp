#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "cachesched/qkp_scheduler.hpp"
#include "cachesched/schedule.hpp"
#include "support/instances.hpp"

namespace cachesched {
namespace {

using testing::make_affinity;
using testing::make_task_set;

bool has_rule(const std::vector<ScheduleViolation>& v, ScheduleRule rule) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.rule == rule; });
}

TEST(BuildSchedule, SingleJobHalfWeight) {
  const auto p = make_problem(make_task_set({{4, 2, 1}}, 1, 1024), AffinityMatrix(1));
  AssignmentTensor x(1, 1, 1);
  x.set(0, 0, 0, true);
  WeightMatrix w(1, 1);
  w.set(0, 0, Rational(1, 2));
  const auto s = build_schedule(p, x, w);
  ASSERT_EQ(s.slices.size(), 1u);
  EXPECT_EQ(s.slices[0].core, 0);
  EXPECT_EQ(s.slices[0].start, Rational(0));
  EXPECT_EQ(s.slices[0].end, Rational(2));
}

TEST(BuildSchedule, BackToBackInJobOrder) {
  const auto p = make_problem(make_task_set({{4, 2, 1}, {4, 2, 1}}, 2, 1024), AffinityMatrix(2));
  AssignmentTensor x(2, 2, 1);
  x.set(0, 0, 0, true);
  x.set(1, 0, 0, true);
  WeightMatrix w(2, 1);
  w.set(0, 0, Rational(1, 2));
  w.set(1, 0, Rational(1, 2));
  const auto s = build_schedule(p, x, w);
  ASSERT_EQ(s.slices.size(), 2u);
  EXPECT_EQ(s.slices[0].job_id, 0);
  EXPECT_EQ(s.slices[0].end, Rational(2));
  EXPECT_EQ(s.slices[1].job_id, 1);
  EXPECT_EQ(s.slices[1].start, Rational(2));
  EXPECT_EQ(s.slices[1].end, Rational(4));
  EXPECT_TRUE(validate_schedule(s, p.task_set, p.timeline.jobs).empty());
}

TEST(BuildSchedule, OverloadThrows) {
  const auto p = make_problem(make_task_set({{4, 3, 1}, {4, 3, 1}}, 2, 1024), AffinityMatrix(2));
  AssignmentTensor x(2, 2, 1);
  x.set(0, 0, 0, true);
  x.set(1, 0, 0, true);
  WeightMatrix w(2, 1);
  w.set(0, 0, Rational(3, 4));
  w.set(1, 0, Rational(3, 4));
  EXPECT_THROW(build_schedule(p, x, w), std::invalid_argument);
}

TEST(BuildSchedule, WorkedInstanceExecutesWcet) {
  const auto p = testing::worked_problem();
  const auto r = solve_exact(p, {});
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  const auto s = build_schedule(p, r.assignment, r.weights);
  std::map<int, Rational> executed;
  for (const auto& sl : s.slices) executed[sl.job_id] += sl.end - sl.start;
  for (const Job& j : p.timeline.jobs) EXPECT_EQ(executed[j.job_id], Rational(j.wcet)) << "job " << j.job_id;
  EXPECT_TRUE(validate_schedule(s, p.task_set, p.timeline.jobs).empty());
}

// t0 (P=4) splits the hyper-period of t1 (P=8) into two intervals.
struct TwoIntervals {
  CacheProblem p = make_problem(make_task_set({{4, 1, 1}, {8, 2, 1}}, 2, 1024), make_affinity(2, {{0, 1, 1}}));
  // jobs: 0=(0,t0) 1=(0,t1) 2=(4,t0)
  AssignmentTensor x{3, 2, 2};
  WeightMatrix w{3, 2};
  TwoIntervals() {
    x.set(0, 0, 0, true);
    x.set(2, 0, 1, true);
    w.set(0, 0, Rational(1, 4));
    w.set(2, 1, Rational(1, 4));
    w.set(1, 0, Rational(1, 4));
    w.set(1, 1, Rational(1, 4));
  }
};

TEST(CountMigrations, SameCoreIsZero) {
  TwoIntervals t;
  t.x.set(1, 1, 0, true);
  t.x.set(1, 1, 1, true);
  const auto s = build_schedule(t.p, t.x, t.w);
  EXPECT_EQ(count_migrations(s), 0);
  EXPECT_TRUE(validate_schedule(s, t.p.task_set, t.p.timeline.jobs).empty());
}

TEST(CountMigrations, CoreChangeIsOne) {
  TwoIntervals t;
  t.x.set(1, 0, 0, true);
  t.x.set(1, 1, 1, true);
  const auto s = build_schedule(t.p, t.x, t.w);
  EXPECT_EQ(count_migrations(s), 1);
  EXPECT_EQ(s.metrics.migrations, 1);
  EXPECT_TRUE(validate_schedule(s, t.p.task_set, t.p.timeline.jobs).empty());
}

TEST(ValidateSchedule, TruncatedSliceUnderExecutes) {
  const auto p = testing::worked_problem();
  const auto r = solve_exact(p, {});
  auto s = build_schedule(p, r.assignment, r.weights);
  ASSERT_FALSE(s.slices.empty());
  auto& sl = s.slices.front();
  sl.end = sl.start + (sl.end - sl.start) * Rational(1, 2);
  const auto v = validate_schedule(s, p.task_set, p.timeline.jobs);
  ASSERT_TRUE(has_rule(v, ScheduleRule::ExecutionMismatch));
  EXPECT_EQ(v.front().job, sl.job_id);
}

TEST(ValidateSchedule, OverlapOnCore) {
  const auto p = make_problem(make_task_set({{4, 2, 1}, {4, 2, 1}}, 2, 1024), AffinityMatrix(2));
  Schedule s;
  s.hyper_period = 4;
  s.core_count = 2;
  s.slices = {{0, 0, 0, Rational(0), Rational(2), 0}, {1, 1, 0, Rational(1), Rational(3), 0}};
  EXPECT_TRUE(has_rule(validate_schedule(s, p.task_set, p.timeline.jobs), ScheduleRule::CoreOverlap));
}

TEST(ValidateSchedule, SelfParallelAndOutsideWindow) {
  const auto p = make_problem(make_task_set({{4, 2, 1}}, 2, 1024), AffinityMatrix(1));
  Schedule s;
  s.hyper_period = 4;
  s.core_count = 2;
  s.slices = {{0, 0, 0, Rational(0), Rational(1), 0}, {0, 0, 1, Rational(0), Rational(1), 0}};
  EXPECT_TRUE(has_rule(validate_schedule(s, p.task_set, p.timeline.jobs), ScheduleRule::SelfParallel));
  s.slices = {{0, 0, 0, Rational(3), Rational(5), 0}};
  const auto v = validate_schedule(s, p.task_set, p.timeline.jobs);
  EXPECT_TRUE(has_rule(v, ScheduleRule::OutsideWindow) || has_rule(v, ScheduleRule::BadSlice));
  s.slices = {{0, 0, 0, Rational(2), Rational(2), 0}, {0, 0, 0, Rational(0), Rational(2), 0}};
  EXPECT_TRUE(has_rule(validate_schedule(s, p.task_set, p.timeline.jobs), ScheduleRule::BadSlice));
}

TEST(Properties, RoundTripAndConservation) {
  std::mt19937_64 rng(321);
  int built = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto p = testing::random_small_problem(rng, 20000);
    for (Method m : {Method::Exact, Method::Greedy, Method::LocalSearch}) {
      SolverConfig cfg;
      cfg.method = m;
      const auto r = solve(p, cfg);
      if (!r.has_solution()) continue;
      const auto s = build_schedule(p, r.assignment, r.weights);
      ++built;
      EXPECT_TRUE(validate_schedule(s, p.task_set, p.timeline.jobs).empty());
      std::map<std::pair<int, int>, Rational> busy;
      for (const auto& sl : s.slices) busy[{sl.core, sl.interval}] += sl.end - sl.start;
      for (const auto& [key, total] : busy)
        EXPECT_LE(total, Rational(p.timeline.intervals.duration(static_cast<std::size_t>(key.second))));
      for (std::size_t a = 1; a < s.slices.size(); ++a) {
        const auto& x = s.slices[a - 1];
        const auto& y = s.slices[a];
        EXPECT_TRUE(x.core < y.core || (x.core == y.core && x.start <= y.start));
      }
      if (p.cores() == 1) EXPECT_EQ(s.metrics.migrations, 0);
      const auto again = build_schedule(p, r.assignment, r.weights);
      EXPECT_EQ(again.slices, s.slices);
    }
  }
  EXPECT_GT(built, 50);
}

}  // namespace
}  // namespace cachesched
