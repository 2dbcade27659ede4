#include "cachesched/weight_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace cachesched {

namespace {

// Dinic max-flow on int64 capacities. Edge e and e^1 are a residual pair.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int add_edge(int from, int to, std::int64_t cap) {
    const int id = static_cast<int>(to_.size());
    to_.push_back(to);
    cap_.push_back(cap);
    to_.push_back(from);
    cap_.push_back(0);
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      it_.assign(adj_.size(), 0);
      while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += pushed;
    }
    return total;
  }

  std::int64_t residual(int e) const { return cap_[static_cast<std::size_t>(e)]; }
  // Flow on a forward edge = residual of its reverse twin.
  std::int64_t flow(int e) const { return cap_[static_cast<std::size_t>(e ^ 1)]; }
  int head(int e) const { return to_[static_cast<std::size_t>(e)]; }
  const std::vector<int>& out_edges(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int node_count() const { return static_cast<int>(adj_.size()); }

 private:
  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : adj_[static_cast<std::size_t>(v)]) {
        int u = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 && level_[static_cast<std::size_t>(u)] < 0) {
          level_[static_cast<std::size_t>(u)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(u);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t limit) {
    if (v == t) return limit;
    auto& i = it_[static_cast<std::size_t>(v)];
    const auto& edges = adj_[static_cast<std::size_t>(v)];
    for (; i < edges.size(); ++i) {
      const int e = edges[i];
      const int u = to_[static_cast<std::size_t>(e)];
      if (cap_[static_cast<std::size_t>(e)] <= 0 ||
          level_[static_cast<std::size_t>(u)] != level_[static_cast<std::size_t>(v)] + 1)
        continue;
      std::int64_t got = dfs(u, t, std::min(limit, cap_[static_cast<std::size_t>(e)]));
      if (got > 0) {
        cap_[static_cast<std::size_t>(e)] -= got;
        cap_[static_cast<std::size_t>(e ^ 1)] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<int> to_;
  std::vector<std::int64_t> cap_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

struct SlotEdge {
  int job;
  int interval;
  int edge;           // forward edge job -> (cache, interval) in the reduced network
  std::int64_t lower; // lower bound removed from the edge, in flow units
};

}  // namespace

std::optional<WeightMatrix> complete_weights(const CacheProblem& problem, const AssignmentTensor& assignment,
                                             const LinkPolicy& link) {
  const auto& tl = problem.timeline;
  const int m = problem.cores();
  const int n_jobs = static_cast<int>(tl.jobs.size());
  const int n_int = static_cast<int>(tl.intervals.size());
  const bool epsilon = link.mode == LinkPolicy::Mode::Epsilon;
  // One flow unit is 1/q tick so that epsilon * |I_k| is integral.
  const std::int64_t q = epsilon ? link.epsilon.den() : 1;

  // Nodes: s, t, jobs, slots (cache, interval), super source, super sink.
  const int s = 0, t = 1, job0 = 2, slot0 = job0 + n_jobs;
  const int super_s = slot0 + m * n_int, super_t = super_s + 1;
  FlowNetwork net(super_t + 1);
  std::vector<std::int64_t> excess(static_cast<std::size_t>(super_t + 1), 0);
  auto slot_node = [&](int cache, int k) { return slot0 + k * m + cache; };

  std::vector<SlotEdge> slots;
  for (const Job& job : tl.jobs) {
    const std::int64_t demand = job.wcet * q;
    excess[static_cast<std::size_t>(job0 + job.job_id)] += demand;
    excess[static_cast<std::size_t>(s)] -= demand;
    for (int k : tl.windows.of(job.job_id)) {
      const int cnt = assignment.assigned_count(job.job_id, k);
      if (cnt > 1) return std::nullopt;
      if (cnt == 0) continue;
      const int cache = assignment.cache_of(job.job_id, k);
      const std::int64_t len = tl.intervals.duration(static_cast<std::size_t>(k)) * q;
      const std::int64_t lower = epsilon ? link.epsilon.num() * tl.intervals.duration(static_cast<std::size_t>(k)) : 0;
      const int e = net.add_edge(job0 + job.job_id, slot_node(cache, k), len - lower);
      excess[static_cast<std::size_t>(slot_node(cache, k))] += lower;
      excess[static_cast<std::size_t>(job0 + job.job_id)] -= lower;
      slots.push_back(SlotEdge{job.job_id, k, e, lower});
    }
  }
  for (int k = 0; k < n_int; ++k)
    for (int j = 0; j < m; ++j)
      net.add_edge(slot_node(j, k), t, tl.intervals.duration(static_cast<std::size_t>(k)) * q);
  net.add_edge(t, s, std::numeric_limits<std::int64_t>::max() / 4);

  std::int64_t required = 0;
  for (int v = 0; v < super_s; ++v) {
    const std::int64_t ex = excess[static_cast<std::size_t>(v)];
    if (ex > 0) {
      net.add_edge(super_s, v, ex);
      required += ex;
    } else if (ex < 0) {
      net.add_edge(v, super_t, -ex);
    }
  }
  if (net.max_flow(super_s, super_t) != required) return std::nullopt;

  // Base flow per slot edge, in units of 1/q tick.
  std::vector<std::int64_t> amount(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) amount[i] = slots[i].lower + net.flow(slots[i].edge);

  std::int64_t scale = 1;
  if (!epsilon) {
    // Every zero slot edge that lies on a residual cycle can be made
    // positive. Scaling the base flow by N and adding one unit around each
    // such cycle keeps all capacities and all already-positive edges intact.
    std::vector<std::vector<int>> cycles;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (amount[i] != 0) continue;
      const int from = net.head(slots[i].edge);
      const int target = job0 + slots[i].job;
      std::vector<int> parent_edge(static_cast<std::size_t>(net.node_count()), -1);
      std::vector<char> seen(static_cast<std::size_t>(net.node_count()), 0);
      std::queue<int> bfs;
      bfs.push(from);
      seen[static_cast<std::size_t>(from)] = 1;
      while (!bfs.empty() && !seen[static_cast<std::size_t>(target)]) {
        int v = bfs.front();
        bfs.pop();
        for (int e : net.out_edges(v)) {
          int u = net.head(e);
          if (u == super_s || u == super_t || seen[static_cast<std::size_t>(u)] || net.residual(e) <= 0) continue;
          seen[static_cast<std::size_t>(u)] = 1;
          parent_edge[static_cast<std::size_t>(u)] = e;
          bfs.push(u);
        }
      }
      if (!seen[static_cast<std::size_t>(target)]) continue;
      std::vector<int> path{slots[i].edge};
      for (int v = target; v != from; v = net.head(parent_edge[static_cast<std::size_t>(v)] ^ 1))
        path.push_back(parent_edge[static_cast<std::size_t>(v)]);
      cycles.push_back(std::move(path));
    }
    if (!cycles.empty()) {
      scale = static_cast<std::int64_t>(cycles.size()) + 1;
      std::vector<std::int64_t> delta(slots.size(), 0);
      // Slot edges were added first, so slot i owns edge pair (2i, 2i+1).
      for (const auto& cycle : cycles) {
        for (int e : cycle) {
          const auto idx = static_cast<std::size_t>(e / 2);
          if (idx < slots.size()) delta[idx] += (e & 1) ? -1 : 1;
        }
      }
      for (std::size_t i = 0; i < slots.size(); ++i) amount[i] = amount[i] * scale + delta[i];
    }
  }

  WeightMatrix w(tl.jobs.size(), tl.intervals.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::int64_t len = tl.intervals.duration(static_cast<std::size_t>(slots[i].interval));
    w.set(slots[i].job, slots[i].interval, Rational(amount[i], q * scale * len));
  }
  return w;
}

}  // namespace cachesched
