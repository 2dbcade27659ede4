#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cachesched/errors.hpp"
#include "cachesched/evaluator.hpp"
#include "support/instances.hpp"

namespace cachesched {
namespace {

TEST(Generator, SingleTaskHalfUtilization) {
  GeneratorSpec spec;
  spec.task_count = 1;
  spec.target_utilization = 0.5;
  spec.core_count = 1;
  spec.periods = {4};
  const auto inst = generate_task_set(spec);
  ASSERT_EQ(inst.task_set.tasks.size(), 1u);
  EXPECT_EQ(inst.task_set.tasks[0].period, 4);
  EXPECT_EQ(inst.task_set.tasks[0].wcet, 2);
  EXPECT_TRUE(inst.flows.empty());
}

TEST(Generator, DeterministicPerSeed) {
  GeneratorSpec spec;
  spec.task_count = 6;
  spec.target_utilization = 1.5;
  spec.seed = 42;
  EXPECT_EQ(write_instance(generate_task_set(spec)), write_instance(generate_task_set(spec)));
  GeneratorSpec other = spec;
  other.seed = 43;
  EXPECT_NE(write_instance(generate_task_set(spec)), write_instance(generate_task_set(other)));
}

TEST(Generator, RejectsUnreachableSpecs) {
  GeneratorSpec spec;
  spec.target_utilization = 3.0;
  spec.core_count = 2;
  EXPECT_THROW(validate_generator_spec(spec), ValidationError);
  spec = GeneratorSpec{};
  spec.task_count = 2;
  spec.target_utilization = 2.5;
  spec.core_count = 4;
  EXPECT_THROW(generate_task_set(spec), ValidationError);
  spec = GeneratorSpec{};
  spec.periods.clear();
  EXPECT_THROW(validate_generator_spec(spec), ValidationError);
  spec = GeneratorSpec{};
  spec.wss_min = 9000;
  spec.wss_max = 100;
  EXPECT_THROW(validate_generator_spec(spec), ValidationError);
}

TEST(Generator, HundredRandomSpecsValidate) {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorSpec spec;
    // At most three tasks per core keeps sum(1/P_i) under the core count
    // for most period draws, so the one-tick floor rarely binds.
    spec.core_count = std::uniform_int_distribution<int>(1, 4)(rng);
    spec.task_count = std::uniform_int_distribution<int>(1, 3 * spec.core_count)(rng);
    const double cap = 0.9 * std::min<double>(spec.core_count, spec.task_count);
    spec.target_utilization = std::uniform_real_distribution<double>(0.05, cap)(rng);
    spec.affinity_density = std::uniform_real_distribution<double>(0, 1)(rng);
    spec.seed = rng();
    const auto inst = generate_task_set(spec);
    EXPECT_TRUE(validate_instance(inst).empty()) << "trial " << trial;
    EXPECT_TRUE(utilization_fits(inst.task_set));
    EXPECT_LE(hyper_period(inst.task_set), 80);
    for (const auto& t : inst.task_set.tasks) {
      EXPECT_GE(t.wcet, 1);
      EXPECT_LE(t.wcet, t.period);
      EXPECT_GE(t.wss, spec.wss_min);
      EXPECT_LE(t.wss, spec.wss_max);
    }
    EXPECT_NO_THROW(to_problem(inst));
  }
}

TEST(Compare, WorkedInstanceExactAndGreedy) {
  const auto p = testing::worked_problem();
  const auto report = compare_solvers(p, {Method::Exact, Method::Greedy}, {});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.ideal_objective, 8);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.succeeded()) << row.error;
    EXPECT_EQ(row.objective, 8);
    EXPECT_DOUBLE_EQ(row.gap, 0.0);
    EXPECT_DOUBLE_EQ(row.capture_ratio, 1.0);
    EXPECT_TRUE(row.violations.empty());
  }
  const auto csv = write_comparison_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,Z,bound,gap,runtime_ms,migrations,status,peak_wss,capture_ratio");
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Compare, ZeroAffinityRatioIsOne) {
  const auto base = testing::worked_problem();
  const auto p = make_problem(base.task_set, AffinityMatrix(3));
  const auto report = compare_solvers(p, {Method::Exact, Method::Greedy, Method::LocalSearch, Method::BruteForce}, {});
  EXPECT_EQ(report.ideal_objective, 0);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.objective, 0);
    EXPECT_DOUBLE_EQ(row.capture_ratio, 1.0);
  }
}

TEST(Compare, FailingMethodDoesNotAbortOthers) {
  std::vector<testing::TaskSpec> specs(8, {4, 1, 1});
  const auto p = make_problem(testing::make_task_set(specs, 8, 1 << 20), AffinityMatrix(8));
  const auto report = compare_solvers(p, {Method::BruteForce, Method::Greedy}, {});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_FALSE(report.rows[0].succeeded());
  EXPECT_FALSE(report.rows[0].error.empty());
  EXPECT_TRUE(report.rows[1].succeeded());
}

TEST(Compare, RandomSweepOrdering) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testing::random_small_problem(rng, 20000);
    const auto report =
        compare_solvers(p, {Method::Exact, Method::Greedy, Method::LocalSearch, Method::BruteForce}, {});
    const auto& exact = report.rows[0];
    const auto& brute = report.rows[3];
    if (!exact.succeeded()) {
      EXPECT_FALSE(brute.succeeded());
      continue;
    }
    EXPECT_EQ(exact.objective, brute.objective);
    for (const auto& row : report.rows) {
      if (!row.succeeded()) continue;
      EXPECT_LE(row.objective, exact.objective);
      EXPECT_GE(row.gap, 0.0);
      EXPECT_GE(row.capture_ratio, 0.0);
      EXPECT_LE(row.capture_ratio, 1.0);
      EXPECT_TRUE(row.violations.empty());
      for (auto peak : row.peak_occupancy) EXPECT_LE(peak, p.capacity());
    }
    EXPECT_GE(report.rows[2].objective, report.rows[1].objective);
  }
}

TEST(Compare, CsvStableApartFromRuntime) {
  const auto p = testing::worked_problem();
  auto mask = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
      std::vector<std::string> cols;
      std::stringstream ss(line);
      std::string c;
      while (std::getline(ss, c, ',')) cols.push_back(c);
      if (cols.size() > 4) cols[4] = "*";
      for (const auto& col : cols) out += col + ",";
      out += "\n";
    }
    return out;
  };
  const auto a = write_comparison_csv(compare_solvers(p, {Method::Exact, Method::LocalSearch}, {}));
  const auto b = write_comparison_csv(compare_solvers(p, {Method::Exact, Method::LocalSearch}, {}));
  EXPECT_EQ(mask(a), mask(b));
}

}  // namespace
}  // namespace cachesched
