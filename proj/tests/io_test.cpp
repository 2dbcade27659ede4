#include <random>

#include <gtest/gtest.h>

#include "cachesched/errors.hpp"
#include "cachesched/instance_io.hpp"
#include "cachesched/qkp_scheduler.hpp"
#include "cachesched/schedule_io.hpp"
#include "support/instances.hpp"

namespace cachesched {
namespace {

std::string doc(const std::string& tasks, const std::string& flows = "[]",
                const std::string& platform = R"({"cores": 2, "l1_capacity_bytes": 1024})") {
  return R"({"platform": )" + platform + R"(, "tasks": )" + tasks + R"(, "flows": )" + flows + "}";
}

TEST(InstanceIo, WorkedFixture) {
  const auto inst = load_instance(testing::fixture_path("worked_instance.json"));
  ASSERT_EQ(inst.task_set.tasks.size(), 3u);
  EXPECT_EQ(inst.task_set.tasks[0].wss, 8192);
  EXPECT_EQ(inst.task_set.tasks[1].wss, 4096);
  EXPECT_EQ(inst.task_set.tasks[2].wss, 4096);
  EXPECT_TRUE(validate_instance(inst).empty());
  const auto p = to_problem(inst);
  EXPECT_EQ(p.affinity.at(0, 1), 3);
  EXPECT_EQ(p.affinity.at(0, 2), 1);
  EXPECT_EQ(p.affinity.at(1, 2), 0);
  EXPECT_EQ(p.timeline.hyper_period, 8);
}

TEST(InstanceIo, WriteParseRoundTrip) {
  const auto inst = load_instance(testing::fixture_path("worked_instance.json"));
  const auto text = write_instance(inst);
  const auto again = parse_instance(text);
  EXPECT_EQ(write_instance(again), text);
  EXPECT_EQ(again.flows.size(), inst.flows.size());
}

TEST(InstanceIo, SchemaErrorsAreParseErrors) {
  const std::string ok_task = R"([{"name": "a", "period": 4, "wcet": 1}])";
  EXPECT_NO_THROW(parse_instance(doc(ok_task)));
  EXPECT_THROW(parse_instance("{not json"), ParseError);
  EXPECT_THROW(parse_instance("[]"), ParseError);
  EXPECT_THROW(parse_instance(R"({"platform": {"cores": 1, "l1_capacity_bytes": 1}})"), ParseError);
  EXPECT_THROW(parse_instance(doc(ok_task).insert(1, R"("extra": 1, )")), ParseError);
  EXPECT_THROW(parse_instance(doc(R"([{"name": "a", "period": "4", "wcet": 1}])")), ParseError);
  EXPECT_THROW(parse_instance(doc(R"([{"name": "a", "period": 4, "wcet": 1, "colour": 2}])")), ParseError);
  EXPECT_THROW(parse_instance(doc(R"([{"name": "a", "period": 4, "wcet": 1}, {"name": "a", "period": 4, "wcet": 1}])")),
               ParseError);
  EXPECT_THROW(parse_instance(doc(R"([{"name": "a,b", "period": 4, "wcet": 1}])")), ParseError);
  EXPECT_THROW(
      parse_instance(doc(R"([{"name": "a", "period": 4, "wcet": 1, "sections": [{"name": "d", "size_bytes": -1}]}])")),
      ParseError);
  EXPECT_THROW(parse_instance(doc(ok_task, R"([{"src": "a", "dst": "zz"}])")), ParseError);
  EXPECT_THROW(parse_instance(doc(ok_task, "[]", R"({"cores": 2})")), ParseError);
}

TEST(InstanceIo, RuleViolationsAreDiagnostics) {
  auto over = parse_instance(doc(R"([{"name": "a", "period": 4, "wcet": 5}])"));
  auto diag = validate_instance(over);
  ASSERT_FALSE(diag.empty());
  EXPECT_NE(diag.front().find("a"), std::string::npos);
  EXPECT_THROW(to_problem(over), ValidationError);

  auto big = parse_instance(
      doc(R"([{"name": "a", "period": 4, "wcet": 1, "sections": [{"name": "d", "size_bytes": 4096}]}])"));
  EXPECT_FALSE(validate_instance(big).empty());

  auto self = parse_instance(doc(R"([{"name": "a", "period": 4, "wcet": 1}])", R"([{"src": "a", "dst": "a"}])"));
  EXPECT_FALSE(validate_instance(self).empty());
}

TEST(ScheduleIo, CsvFormat) {
  const auto p = testing::worked_problem();
  const auto r = solve_exact(p, {});
  const auto s = build_schedule(p, r.assignment, r.weights);
  const auto csv = write_schedule_csv(s, p.task_set, {{"Z", "8"}, {"status", "optimal"}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "core,job,task,start_num,start_den,end_num,end_den,interval");
  EXPECT_NE(csv.find("# Z=8\n"), std::string::npos);
  EXPECT_NE(csv.find("# status=optimal\n"), std::string::npos);
  EXPECT_NE(csv.find(",t0,"), std::string::npos);
}

TEST(ScheduleIo, RoundTripRandomSolves) {
  std::mt19937_64 rng(909);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = testing::random_small_problem(rng, 20000);
    const auto r = solve(p, {});
    if (!r.has_solution()) continue;
    const auto s = build_schedule(p, r.assignment, r.weights);
    const SummaryFields summary{{"Z", std::to_string(r.objective)}};
    const auto csv = write_schedule_csv(s, p.task_set, summary);
    const auto parsed = parse_schedule_csv(csv, p.task_set);
    EXPECT_EQ(parsed.schedule.slices, s.slices);
    EXPECT_EQ(parsed.summary, summary);
    EXPECT_EQ(parsed.schedule.hyper_period, s.hyper_period);
    EXPECT_TRUE(validate_schedule(parsed.schedule, p.task_set, p.timeline.jobs).empty());
    EXPECT_EQ(write_schedule_csv(parsed.schedule, p.task_set, parsed.summary), csv);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(ScheduleIo, MalformedCsvRejected) {
  const auto p = testing::worked_problem();
  const std::string header = "core,job,task,start_num,start_den,end_num,end_den,interval\n";
  EXPECT_THROW(parse_schedule_csv("", p.task_set), ParseError);
  EXPECT_THROW(parse_schedule_csv("core,job\n", p.task_set), ParseError);
  EXPECT_THROW(parse_schedule_csv(header + "0,0,t0,0,1\n", p.task_set), ParseError);
  EXPECT_THROW(parse_schedule_csv(header + "0,0,nobody,0,1,2,1,0\n", p.task_set), ParseError);
  EXPECT_THROW(parse_schedule_csv(header + "0,0,t0,0,0,2,1,0\n", p.task_set), ParseError);
  EXPECT_THROW(parse_schedule_csv(header + "x,0,t0,0,1,2,1,0\n", p.task_set), ParseError);
  EXPECT_NO_THROW(parse_schedule_csv(header + "0,0,t0,0,1,2,1,0\n", p.task_set));
}

}  // namespace
}  // namespace cachesched
