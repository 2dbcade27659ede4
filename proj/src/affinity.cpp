#include "cachesched/affinity.hpp"

#include <unordered_map>

#include "cachesched/errors.hpp"

namespace cachesched {

void AffinityMatrix::add(int i, int j, std::int64_t count) {
  if (i == j) throw ValidationError("affinity: a task cannot have affinity with itself");
  a_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] += count;
  a_[static_cast<std::size_t>(j) * n_ + static_cast<std::size_t>(i)] += count;
}

std::int64_t AffinityMatrix::mass(int i) const {
  std::int64_t m = 0;
  for (std::size_t j = 0; j < n_; ++j) m += at(i, static_cast<int>(j));
  return m;
}

std::int64_t AffinityMatrix::total_pairs() const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) s += at(static_cast<int>(i), static_cast<int>(j));
  return s;
}

std::vector<std::int64_t> compute_wss(const DataSectionManifest& manifest, const TaskSet& task_set) {
  std::unordered_map<std::string, const TaskSections*> by_name;
  for (const auto& entry : manifest) by_name[entry.task] = &entry;

  std::vector<std::int64_t> wss;
  wss.reserve(task_set.tasks.size());
  for (const Task& t : task_set.tasks) {
    auto it = by_name.find(t.name);
    if (it == by_name.end()) throw ValidationError("manifest: task '" + t.name + "' has no section list");
    std::int64_t total = 0;
    for (const DataSection& s : it->second->sections) {
      if (s.size_bytes < 0)
        throw ValidationError("manifest: section '" + s.name + "' of task '" + t.name + "' has negative size");
      total += s.size_bytes;
    }
    wss.push_back(total);
  }
  return wss;
}

AffinityMatrix build_affinity(std::span<const CommunicationFlow> flows, std::size_t task_count) {
  AffinityMatrix a(task_count);
  const int n = static_cast<int>(task_count);
  for (const auto& f : flows) {
    if (f.src < 0 || f.src >= n || f.dst < 0 || f.dst >= n)
      throw ValidationError("flow references unknown task id");
    if (f.src == f.dst) throw ValidationError("flow from task " + std::to_string(f.src) + " to itself");
    a.add(f.src, f.dst, 1);
  }
  return a;
}

std::int64_t job_affinity(const AffinityMatrix& affinity, std::span<const Job> jobs, int job_a, int job_b) {
  const int ta = jobs[static_cast<std::size_t>(job_a)].task_id;
  const int tb = jobs[static_cast<std::size_t>(job_b)].task_id;
  return ta == tb ? 0 : affinity.at(ta, tb);
}

}  // namespace cachesched
