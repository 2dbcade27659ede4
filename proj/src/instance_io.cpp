#include "cachesched/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cachesched/errors.hpp"

namespace cachesched {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& required, const std::set<std::string>& optional,
                  const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required)
    if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
}

std::int64_t get_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(where + ": '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  require_keys(doc, {"platform", "tasks"}, {"flows"}, "instance");

  Instance inst;
  const json& platform = doc["platform"];
  require_keys(platform, {"cores", "l1_capacity_bytes"}, {}, "platform");
  inst.task_set.core_count = static_cast<int>(get_int(platform, "cores", "platform"));
  inst.task_set.cache_capacity = get_int(platform, "l1_capacity_bytes", "platform");

  const json& tasks = doc["tasks"];
  if (!tasks.is_array()) throw ParseError("instance: 'tasks' must be an array");
  std::unordered_map<std::string, int> ids;
  for (const json& t : tasks) {
    const std::string where = "task #" + std::to_string(inst.task_set.tasks.size());
    require_keys(t, {"name", "period", "wcet"}, {"sections"}, where);
    Task task;
    task.id = static_cast<int>(inst.task_set.tasks.size());
    task.name = get_string(t, "name", where);
    if (task.name.empty() || task.name.find_first_of(",#\n\r\"") != std::string::npos)
      throw ParseError(where + ": task name must be non-empty without ',', '#', quotes or newlines");
    if (!ids.emplace(task.name, task.id).second) throw ParseError("duplicate task name '" + task.name + "'");
    task.period = get_int(t, "period", where);
    task.wcet = get_int(t, "wcet", where);

    TaskSections entry{task.name, {}};
    if (t.contains("sections")) {
      if (!t["sections"].is_array()) throw ParseError(where + ": 'sections' must be an array");
      for (const json& s : t["sections"]) {
        require_keys(s, {"name", "size_bytes"}, {}, where + " section");
        DataSection sec{get_string(s, "name", where), get_int(s, "size_bytes", where)};
        if (sec.size_bytes < 0) throw ParseError(where + ": section '" + sec.name + "' has negative size");
        entry.sections.push_back(std::move(sec));
      }
    }
    inst.manifest.push_back(std::move(entry));
    inst.task_set.tasks.push_back(std::move(task));
  }
  const auto wss = compute_wss(inst.manifest, inst.task_set);
  for (std::size_t i = 0; i < wss.size(); ++i) inst.task_set.tasks[i].wss = wss[i];

  if (doc.contains("flows")) {
    if (!doc["flows"].is_array()) throw ParseError("instance: 'flows' must be an array");
    for (const json& f : doc["flows"]) {
      require_keys(f, {"src", "dst"}, {}, "flow");
      const std::string src = get_string(f, "src", "flow");
      const std::string dst = get_string(f, "dst", "flow");
      auto s = ids.find(src), d = ids.find(dst);
      if (s == ids.end()) throw ParseError("flow: unknown task '" + src + "'");
      if (d == ids.end()) throw ParseError("flow: unknown task '" + dst + "'");
      inst.flows.push_back({s->second, d->second});
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::vector<std::string> validate_instance(const Instance& instance) {
  auto problems = validate_task_set(instance.task_set);
  for (const auto& f : instance.flows) {
    if (f.src == f.dst)
      problems.push_back("flow: task '" + instance.task_set.tasks[static_cast<std::size_t>(f.src)].name +
                         "' communicates with itself");
  }
  return problems;
}

std::string write_instance(const Instance& instance) {
  json doc;
  doc["platform"] = {{"cores", instance.task_set.core_count}, {"l1_capacity_bytes", instance.task_set.cache_capacity}};
  json tasks = json::array();
  for (const Task& t : instance.task_set.tasks) {
    json sections = json::array();
    for (const auto& entry : instance.manifest) {
      if (entry.task != t.name) continue;
      for (const auto& s : entry.sections) sections.push_back({{"name", s.name}, {"size_bytes", s.size_bytes}});
    }
    tasks.push_back({{"name", t.name}, {"period", t.period}, {"wcet", t.wcet}, {"sections", sections}});
  }
  doc["tasks"] = tasks;
  json flows = json::array();
  for (const auto& f : instance.flows)
    flows.push_back({{"src", instance.task_set.tasks[static_cast<std::size_t>(f.src)].name},
                     {"dst", instance.task_set.tasks[static_cast<std::size_t>(f.dst)].name}});
  doc["flows"] = flows;
  return doc.dump(2) + "\n";
}

CacheProblem to_problem(const Instance& instance) {
  auto problems = validate_instance(instance);
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw ValidationError(msg);
  }
  return make_problem(instance.task_set, build_affinity(instance.flows, instance.task_set.tasks.size()));
}

}  // namespace cachesched
