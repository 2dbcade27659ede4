#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "cachesched/qkp_scheduler.hpp"

namespace cachesched {

namespace {

constexpr double kIntegrality = 1e-6;
constexpr double kBoundSlack = 1e-6;

struct Fixing {
  int var;
  bool one;
};

struct Node {
  std::vector<Fixing> fixings;
  LpOutcome relaxation;
};

class BranchAndBound {
 public:
  BranchAndBound(const CacheProblem& problem, const LinearizedModel& model, const SolverConfig& config)
      : problem_(problem), model_(model), config_(config), start_(std::chrono::steady_clock::now()) {
    // Affinity mass of the job owning each x variable, for branching ties.
    mass_.assign(static_cast<std::size_t>(model.lp.variable_count()), 0);
    for (std::size_t i = 0; i < model.jobs; ++i)
      for (std::size_t k = 0; k < model.intervals; ++k)
        for (int j = 0; j < model.caches; ++j) {
          const int v = model.x(static_cast<int>(i), static_cast<int>(k), j);
          if (v < 0) continue;
          mass_[static_cast<std::size_t>(v)] =
              problem.affinity.mass(problem.timeline.jobs[i].task_id);
        }
  }

  SolveResult run() {
    SolveResult result;
    validate_config(config_);

    SolveResult greedy = solve_greedy(problem_, config_);
    if (greedy.status == SolveStatus::Feasible) {
      incumbent_ = EvaluatedAssignment{greedy.assignment, greedy.weights, greedy.objective};
    }

    Node root{{}, relax({})};
    result.upper_bound = root.relaxation.status == LpStatus::Optimal ? std::optional<double>(root.relaxation.objective)
                                                                       : std::nullopt;
    bool complete = true;
    if (root.relaxation.status == LpStatus::IterationLimit) {
      complete = false;
    } else if (root.relaxation.status == LpStatus::Optimal) {
      std::vector<Node> stack;
      stack.push_back(std::move(root));
      while (!stack.empty()) {
        if (out_of_budget()) {
          complete = false;
          break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        ++nodes_;
        if (!improves(node.relaxation.objective)) continue;
        const int var = choose_branch(node);
        if (var < 0) continue;
        Node up{node.fixings, {}}, down{node.fixings, {}};
        up.fixings.push_back({var, true});
        down.fixings.push_back({var, false});
        up.relaxation = relax(up.fixings);
        down.relaxation = relax(down.fixings);
        if (up.relaxation.status == LpStatus::IterationLimit || down.relaxation.status == LpStatus::IterationLimit)
          complete = false;
        const bool up_ok = up.relaxation.status == LpStatus::Optimal;
        const bool down_ok = down.relaxation.status == LpStatus::Optimal;
        // Depth-first; the child with the better bound is explored first,
        // the x = 1 child on ties.
        if (up_ok && down_ok) {
          if (down.relaxation.objective > up.relaxation.objective + kBoundSlack) {
            stack.push_back(std::move(up));
            stack.push_back(std::move(down));
          } else {
            stack.push_back(std::move(down));
            stack.push_back(std::move(up));
          }
        } else if (up_ok) {
          stack.push_back(std::move(up));
        } else if (down_ok) {
          stack.push_back(std::move(down));
        }
      }
    }

    result.nodes = nodes_;
    result.lp_solves = lp_solves_;
    result.pivots = pivots_;
    if (incumbent_) {
      result.assignment = incumbent_->assignment;
      result.weights = incumbent_->weights;
      result.objective = incumbent_->objective;
      result.status = complete ? SolveStatus::Optimal : SolveStatus::LimitReached;
    } else {
      result.status = complete ? SolveStatus::Infeasible : SolveStatus::LimitReached;
      if (!complete) result.message = "limit reached before any feasible assignment was found";
    }
    if (!complete && result.message.empty()) result.message = "search stopped by node or time limit";
    return result;
  }

 private:
  LpOutcome relax(const std::vector<Fixing>& fixings) {
    LinearProgram lp = model_.lp;
    for (const auto& f : fixings) lp.set_bounds(f.var, f.one ? 1.0 : 0.0, f.one ? 1.0 : 0.0);
    LpOutcome out = solve_lp(lp);
    ++lp_solves_;
    pivots_ += out.pivots;
    return out;
  }

  bool improves(double bound) const {
    if (!incumbent_) return true;
    // Objectives are integral.
    return std::floor(bound + kBoundSlack) > static_cast<double>(incumbent_->objective);
  }

  bool out_of_budget() const {
    if (nodes_ >= config_.node_limit) return true;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return elapsed > config_.time_limit_s;
  }

  // Picks the x variable to branch on, or -1 when the node is resolved.
  int choose_branch(const Node& node) {
    std::vector<char> fixed(static_cast<std::size_t>(model_.lp.variable_count()), 0);
    for (const auto& f : node.fixings) fixed[static_cast<std::size_t>(f.var)] = 1;
    const auto& values = node.relaxation.values;

    int best = -1;
    double best_frac = kIntegrality;
    for (int v : model_.x_vars) {
      if (fixed[static_cast<std::size_t>(v)]) continue;
      const double val = values[static_cast<std::size_t>(v)];
      const double frac = std::min(val - std::floor(val), std::ceil(val) - val);
      if (frac > best_frac + 1e-9 ||
          (best >= 0 && std::fabs(frac - best_frac) <= 1e-9 && mass_[static_cast<std::size_t>(v)] > mass_[static_cast<std::size_t>(best)])) {
        best = v;
        best_frac = frac;
      }
    }
    if (best >= 0) return best;

    // Integral x: score it exactly (weights by flow, zero-weight slots cleared).
    const AssignmentTensor x = model_.assignment_from(values);
    auto eval = evaluate_assignment(problem_, x, config_);
    if (eval && (!incumbent_ || eval->objective > incumbent_->objective)) incumbent_ = std::move(*eval);
    if (!improves(node.relaxation.objective)) return -1;

    // The relaxation overstates this point (an assigned slot that can only
    // carry zero weight, or LP tolerance). Keep branching on free x variables,
    // those set to 1 first.
    int pick = -1;
    for (int v : model_.x_vars) {
      if (fixed[static_cast<std::size_t>(v)]) continue;
      const bool one = values[static_cast<std::size_t>(v)] > 0.5;
      if (pick < 0) {
        pick = v;
        continue;
      }
      const bool pick_one = values[static_cast<std::size_t>(pick)] > 0.5;
      if ((one && !pick_one) || (one == pick_one && mass_[static_cast<std::size_t>(v)] > mass_[static_cast<std::size_t>(pick)]))
        pick = v;
    }
    return pick;
  }

  const CacheProblem& problem_;
  const LinearizedModel& model_;
  const SolverConfig& config_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::int64_t> mass_;
  std::optional<EvaluatedAssignment> incumbent_;
  long nodes_ = 0;
  long lp_solves_ = 0;
  long pivots_ = 0;
};

}  // namespace

SolveResult solve_exact(const CacheProblem& problem, const LinearizedModel& model, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult r = BranchAndBound(problem, model, config).run();
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SolveResult solve_exact(const CacheProblem& problem, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const LinearizedModel model = build_linearized_model(problem, config);
  SolveResult r = BranchAndBound(problem, model, config).run();
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cachesched
