#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cachesched/schedule.hpp"

namespace cachesched {

// Trailing "# key=value" lines of a schedule export.
using SummaryFields = std::vector<std::pair<std::string, std::string>>;

// CSV with header core,job,task,start_num,start_den,end_num,end_den,interval
// (task by name), rows in slice order, then the summary as "# key=value".
std::string write_schedule_csv(const Schedule& schedule, const TaskSet& task_set, const SummaryFields& summary);

struct ParsedSchedule {
  Schedule schedule;
  SummaryFields summary;
};

// Inverse of write_schedule_csv; hyper_period and core count come from the
// task set. Throws ParseError on malformed input.
ParsedSchedule parse_schedule_csv(const std::string& text, const TaskSet& task_set);

}  // namespace cachesched
