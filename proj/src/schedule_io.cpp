#include "cachesched/schedule_io.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>

#include "cachesched/errors.hpp"

namespace cachesched {

namespace {

constexpr const char* kHeader = "core,job,task,start_num,start_den,end_num,end_den,interval";

std::int64_t to_int(const std::string& field, int line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("schedule line " + std::to_string(line) + ": '" + field + "' is not an integer");
  return v;
}

}  // namespace

std::string write_schedule_csv(const Schedule& schedule, const TaskSet& task_set, const SummaryFields& summary) {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& s : schedule.slices) {
    os << s.core << ',' << s.job_id << ',' << task_set.tasks[static_cast<std::size_t>(s.task_id)].name << ','
       << s.start.num() << ',' << s.start.den() << ',' << s.end.num() << ',' << s.end.den() << ',' << s.interval << '\n';
  }
  for (const auto& [key, value] : summary) os << "# " << key << '=' << value << '\n';
  return os.str();
}

ParsedSchedule parse_schedule_csv(const std::string& text, const TaskSet& task_set) {
  std::unordered_map<std::string, int> ids;
  for (const Task& t : task_set.tasks) ids[t.name] = t.id;

  ParsedSchedule out;
  out.schedule.core_count = task_set.core_count;
  out.schedule.hyper_period = hyper_period(task_set);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ParseError("schedule line " + std::to_string(lineno) + ": summary needs key=value");
      out.summary.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header) {
      if (line != kHeader) throw ParseError("schedule: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ParseError("schedule line " + std::to_string(lineno) + ": expected 8 fields");
    auto task = ids.find(f[2]);
    if (task == ids.end()) throw ParseError("schedule line " + std::to_string(lineno) + ": unknown task '" + f[2] + "'");
    TimeSlice s;
    s.core = static_cast<int>(to_int(f[0], lineno));
    s.job_id = static_cast<int>(to_int(f[1], lineno));
    s.task_id = task->second;
    try {
      s.start = Rational(to_int(f[3], lineno), to_int(f[4], lineno));
      s.end = Rational(to_int(f[5], lineno), to_int(f[6], lineno));
    } catch (const std::invalid_argument&) {
      throw ParseError("schedule line " + std::to_string(lineno) + ": zero denominator");
    }
    s.interval = static_cast<int>(to_int(f[7], lineno));
    out.schedule.slices.push_back(s);
  }
  if (!header) throw ParseError("schedule: missing header");
  out.schedule.metrics = compute_metrics(out.schedule);
  return out;
}

}  // namespace cachesched
