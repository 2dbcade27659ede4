#pragma once

#include <string>
#include <vector>

#include "cachesched/affinity.hpp"
#include "cachesched/problem.hpp"
#include "cachesched/task_model.hpp"

namespace cachesched {

// A task set as declared in an instance file: WSS comes from the manifest,
// affinity from the flows.
struct Instance {
  TaskSet task_set;  // task wss filled from the manifest
  DataSectionManifest manifest;
  std::vector<CommunicationFlow> flows;
};

// Parses the JSON instance document. Throws ParseError for malformed
// documents, wrong types, unknown keys, duplicate task names, negative
// section sizes and flows naming unknown tasks. Rule violations (wcet >
// period, ...) are left for validate_instance.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

// One diagnostic line per rule violation (task set rules and self-flows).
std::vector<std::string> validate_instance(const Instance& instance);

std::string write_instance(const Instance& instance);

// Throws ValidationError when validate_instance reports anything.
CacheProblem to_problem(const Instance& instance);

}  // namespace cachesched
