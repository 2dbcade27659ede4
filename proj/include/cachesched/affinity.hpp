#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cachesched/task_model.hpp"

namespace cachesched {

struct DataSection {
  std::string name;
  std::int64_t size_bytes = 0;
};

struct TaskSections {
  std::string task;  // task name
  std::vector<DataSection> sections;
};

using DataSectionManifest = std::vector<TaskSections>;

// Directed communication flow between two tasks (by id).
struct CommunicationFlow {
  int src = 0;
  int dst = 0;
};

// Symmetric, zero-diagonal count of flows between task pairs.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  explicit AffinityMatrix(std::size_t tasks) : n_(tasks), a_(tasks * tasks, 0) {}

  std::size_t size() const { return n_; }
  std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)]; }
  void add(int i, int j, std::int64_t count);

  // Sum over task i' of a[i][i'].
  std::int64_t mass(int i) const;
  std::int64_t total_pairs() const;  // sum over unordered pairs

  friend bool operator==(const AffinityMatrix&, const AffinityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> a_;
};

// WSS per task id = sum of the sizes of its sections. Throws
// ValidationError for tasks missing from the manifest or negative sizes.
std::vector<std::int64_t> compute_wss(const DataSectionManifest& manifest, const TaskSet& task_set);

// Throws ValidationError on self-flows or out-of-range task ids.
AffinityMatrix build_affinity(std::span<const CommunicationFlow> flows, std::size_t task_count);

// Affinity of the owning tasks; 0 for two jobs of the same task.
std::int64_t job_affinity(const AffinityMatrix& affinity, std::span<const Job> jobs, int job_a, int job_b);

}  // namespace cachesched
