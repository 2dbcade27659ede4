#include "cachesched/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cachesched/errors.hpp"
#include "cachesched/evaluator.hpp"
#include "cachesched/instance_io.hpp"
#include "cachesched/qkp_scheduler.hpp"
#include "cachesched/schedule.hpp"
#include "cachesched/schedule_io.hpp"

namespace cachesched {

namespace {

struct SolveFlags {
  std::string input;
  std::string solver = "exact";
  double time_limit = 30.0;
  long node_limit = 1'000'000;
  std::uint64_t seed = 0;
  bool epsilon_link = false;
  std::string epsilon = "1/1024";
  bool weight_by_interval = false;
  std::string output;
  std::string format = "csv";
  std::vector<std::string> methods;
};

// Writes to --output when given, otherwise to `out`. False on I/O failure.
bool emit(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

Rational parse_epsilon(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("epsilon must be a fraction like 1/1024");
  }
}

SolverConfig make_config(const SolveFlags& f) {
  SolverConfig c;
  c.time_limit_s = f.time_limit;
  c.node_limit = f.node_limit;
  c.seed = f.seed;
  c.weight_by_interval = f.weight_by_interval;
  c.link.epsilon = parse_epsilon(f.epsilon);
  if (f.epsilon_link) c.link.mode = LinkPolicy::Mode::Epsilon;
  validate_config(c);
  return c;
}

// Loads and validates an instance; on failure writes diagnostics and sets
// `code`.
std::optional<Instance> load_checked(const std::string& path, std::ostream& err, int& code) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = exit_code::kIo;
    return std::nullopt;
  }
  auto problems = validate_instance(inst);
  if (!problems.empty()) {
    for (const auto& p : problems) err << "invalid: " << p << '\n';
    code = exit_code::kValidation;
    return std::nullopt;
  }
  return inst;
}

std::string format_bound(const std::optional<double>& b) {
  if (!b) return "none";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << *b;
  return os.str();
}

int cmd_validate(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  int code = exit_code::kOk;
  auto inst = load_checked(f.input, err, code);
  if (!inst) return code;
  const JobTimeline tl = build_timeline(inst->task_set);
  out << "ok: " << inst->task_set.tasks.size() << " tasks, " << tl.jobs.size() << " jobs, " << tl.intervals.size()
      << " intervals, H=" << tl.hyper_period << ", U=" << total_utilization(inst->task_set) << '\n';
  return exit_code::kOk;
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  int code = exit_code::kOk;
  auto inst = load_checked(f.input, err, code);
  if (!inst) return code;
  SolverConfig config;
  try {
    config = make_config(f);
  } catch (const std::exception& e) {
    err << "usage: " << e.what() << '\n';
    return exit_code::kUsage;
  }
  config.method = *parse_method(f.solver);

  SolveResult result;
  CacheProblem problem;
  try {
    problem = to_problem(*inst);
    result = solve(problem, config);
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kGuard;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << '\n';
    return exit_code::kValidation;
  }

  Schedule schedule;
  schedule.hyper_period = problem.timeline.hyper_period;
  schedule.core_count = problem.cores();
  if (result.has_solution()) schedule = build_schedule(problem, result.assignment, result.weights);

  SummaryFields summary{
      {"solver", to_string(config.method)},
      {"status", to_string(result.status)},
      {"Z", std::to_string(result.objective)},
      {"upper_bound", format_bound(result.upper_bound)},
      {"migrations", std::to_string(schedule.metrics.migrations)},
      {"preemptions", std::to_string(schedule.metrics.preemptions)},
      {"hyper_period", std::to_string(problem.timeline.hyper_period)},
      {"intervals", std::to_string(problem.interval_count())},
      {"nodes", std::to_string(result.nodes)},
  };
  std::string text;
  if (f.format == "summary") {
    for (const auto& [k, v] : summary) text += k + "=" + v + "\n";
  } else {
    text = write_schedule_csv(schedule, problem.task_set, summary);
  }
  if (!result.message.empty()) err << "note: " << result.message << '\n';
  if (!emit(f.output, text, out, err)) return exit_code::kIo;

  switch (result.status) {
    case SolveStatus::Optimal:
    case SolveStatus::Feasible: return exit_code::kOk;
    case SolveStatus::Infeasible: return exit_code::kInfeasible;
    case SolveStatus::LimitReached: return exit_code::kLimit;
  }
  return exit_code::kOk;
}

int cmd_compare(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  for (const auto& name : f.methods) {
    if (name.empty()) continue;
    auto m = parse_method(name);
    if (!m) {
      err << "usage: unknown method '" << name << "'\n";
      return exit_code::kUsage;
    }
    methods.push_back(*m);
  }
  if (methods.empty()) {
    err << "usage: --methods needs at least one of exact,greedy,local,brute\n";
    return exit_code::kUsage;
  }
  int code = exit_code::kOk;
  auto inst = load_checked(f.input, err, code);
  if (!inst) return code;
  SolverConfig config;
  try {
    config = make_config(f);
  } catch (const std::exception& e) {
    err << "usage: " << e.what() << '\n';
    return exit_code::kUsage;
  }
  const CacheProblem problem = to_problem(*inst);
  const ComparisonReport report = compare_solvers(problem, methods, config);
  bool any = false;
  for (const auto& row : report.rows) {
    if (row.succeeded()) any = true;
    if (!row.error.empty()) err << to_string(row.method) << ": " << row.error << '\n';
  }
  if (!emit(f.output, write_comparison_csv(report), out, err)) return exit_code::kIo;
  return any ? exit_code::kOk : exit_code::kInfeasible;
}

void read_spec_keys(const nlohmann::json& j, GeneratorSpec& s) {
  for (const auto& [key, v] : j.items()) {
    if (key == "tasks") s.task_count = v.get<int>();
    else if (key == "utilization") s.target_utilization = v.get<double>();
    else if (key == "cores") s.core_count = v.get<int>();
    else if (key == "l1_capacity_bytes") s.cache_capacity = v.get<std::int64_t>();
    else if (key == "periods") s.periods = v.get<std::vector<Tick>>();
    else if (key == "wss_min") s.wss_min = v.get<std::int64_t>();
    else if (key == "wss_max") s.wss_max = v.get<std::int64_t>();
    else if (key == "density") s.affinity_density = v.get<double>();
    else if (key == "flows_min") s.flows_min = v.get<int>();
    else if (key == "flows_max") s.flows_max = v.get<int>();
    else if (key == "seed") s.seed = v.get<std::uint64_t>();
    else throw ParseError("generator spec: unknown key '" + key + "'");
  }
}

GeneratorSpec spec_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("generator spec: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("generator spec: expected a JSON object");
  GeneratorSpec s;
  try {
    read_spec_keys(j, s);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("generator spec: ") + e.what());
  }
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cache-aware static scheduling of periodic real-time tasks"};
  app.require_subcommand(1);
  SolveFlags f;
  GeneratorSpec gen;
  std::string spec_file;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("input", f.input, "Instance JSON")->required();

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--time-limit", f.time_limit, "Seconds per solve")->check(CLI::PositiveNumber);
    sub->add_option("--node-limit", f.node_limit, "Branch-and-bound node cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", f.seed, "Seed for local search move order");
    sub->add_flag("--epsilon-link", f.epsilon_link, "Assigned jobs get weight >= epsilon");
    sub->add_option("--epsilon", f.epsilon, "Epsilon as a fraction (default 1/1024)");
    sub->add_flag("--weight-by-interval", f.weight_by_interval, "Weight pair terms by interval length");
    sub->add_option("--output,-o", f.output, "Output file (default stdout)");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Compute a cache-aware schedule");
  solve_cmd->add_option("input", f.input, "Instance JSON")->required();
  solve_cmd->add_option("--solver", f.solver, "exact|greedy|local|brute")
      ->check(CLI::IsMember({"exact", "greedy", "local", "brute"}));
  solve_cmd->add_option("--format", f.format, "csv|summary")->check(CLI::IsMember({"csv", "summary"}));
  add_solver_flags(solve_cmd);

  auto* compare = app.add_subcommand("compare", "Compare solver methods on one instance");
  compare->add_option("input", f.input, "Instance JSON")->required();
  compare->add_option("--methods", f.methods, "Comma-separated methods")->delimiter(',');
  add_solver_flags(compare);

  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("--spec", spec_file, "Generator spec JSON (flags override nothing when given)");
  generate->add_option("--tasks", gen.task_count);
  generate->add_option("--utilization", gen.target_utilization);
  generate->add_option("--cores", gen.core_count);
  generate->add_option("--l1", gen.cache_capacity, "L1 capacity in bytes");
  generate->add_option("--periods", gen.periods, "Period menu")->delimiter(',');
  generate->add_option("--wss-min", gen.wss_min);
  generate->add_option("--wss-max", gen.wss_max);
  generate->add_option("--density", gen.affinity_density, "Probability a task pair communicates");
  generate->add_option("--flows-min", gen.flows_min);
  generate->add_option("--flows-max", gen.flows_max);
  generate->add_option("--seed", gen.seed);
  generate->add_option("--output,-o", f.output, "Output file (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << '\n' << app.help();
    return exit_code::kUsage;
  }

  try {
    if (*validate) return cmd_validate(f, out, err);
    if (*solve_cmd) return cmd_solve(f, out, err);
    if (*compare) return cmd_compare(f, out, err);
    if (*generate) {
      try {
        if (!spec_file.empty()) gen = spec_from_json(spec_file);
        const Instance inst = generate_task_set(gen);
        return emit(f.output, write_instance(inst), out, err) ? exit_code::kOk : exit_code::kIo;
      } catch (const ValidationError& e) {
        err << "invalid: " << e.what() << '\n';
        return exit_code::kValidation;
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kGuard;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << '\n';
    return exit_code::kValidation;
  }
  return exit_code::kUsage;
}

}  // namespace cachesched
