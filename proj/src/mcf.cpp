// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairlet/mcf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <type_traits>
#include <utility>

#include "fairlet/core.hpp"

namespace fairlet::mcf {

template <typename Cost>
FlowNetwork<Cost>::FlowNetwork(std::size_t node_count)
    : supply_(node_count, 0) {}

template <typename Cost>
EdgeId FlowNetwork<Cost>::add_edge(NodeId from, NodeId to,
                                   std::int64_t capacity,
                                   std::optional<Cost> cost) {
  if (from >= node_count() || to >= node_count()) {
    throw Error("edge endpoint out of range");
  }
  if (from == to) throw Error("self-loops are not allowed");
  if (capacity < 0) throw Error("negative capacity");
  if (cost && *cost < Cost{0}) throw Error("negative edge cost");
  edges_.push_back(Edge<Cost>{from, to, capacity, cost});
  return edges_.size() - 1;
}

template <typename Cost>
void FlowNetwork<Cost>::set_supply(NodeId node, std::int64_t supply) {
  supply_.at(node) = supply;
}

template class FlowNetwork<std::int64_t>;
template class FlowNetwork<double>;

namespace {

// Residual arcs live in one array grouped by tail node (CSR), so a scan of
// a node's out-arcs is a contiguous read.
template <typename Cost>
struct Arc {
  std::uint32_t to;
  std::uint32_t reverse;
  std::int64_t residual;
  Cost cost;
};

template <typename Cost>
constexpr Cost kUnreachable = std::numeric_limits<Cost>::max();

// Successive shortest paths with potentials. Each phase computes reduced
// distances once, then saturates every zero-reduced-cost path by blocking
// flow before the next Dijkstra.
template <typename Cost>
class Solver {
 public:
  explicit Solver(const FlowNetwork<Cost>& net)
      : net_(net),
        source_(net.node_count()),
        sink_(net.node_count() + 1),
        first_(net.node_count() + 3, 0),
        potential_(net.node_count() + 2, Cost{0}) {
    if (net.node_count() + 2 >= std::numeric_limits<std::uint32_t>::max() / 2 ||
        2 * (net.edges().size() + net.node_count()) >=
            std::numeric_limits<std::uint32_t>::max()) {
      throw Error("flow network too large");
    }
    struct Pending {
      NodeId from;
      NodeId to;
      std::int64_t capacity;
      Cost cost;
    };
    std::vector<Pending> pending;
    Cost max_cost{0};
    std::vector<std::size_t> pending_of_edge(net.edges().size(), kNoArc);
    for (EdgeId e = 0; e < net.edges().size(); ++e) {
      const auto& edge = net.edges()[e];
      if (edge.infinite() || edge.capacity == 0) continue;
      pending_of_edge[e] = pending.size();
      pending.push_back({edge.from, edge.to, edge.capacity, *edge.cost});
      max_cost = std::max(max_cost, *edge.cost);
    }
    for (NodeId v = 0; v < net.node_count(); ++v) {
      const std::int64_t s = net.supply(v);
      if (s > 0) {
        pending.push_back({source_, v, s, Cost{0}});
        required_ += s;
      } else if (s < 0) {
        pending.push_back({v, sink_, -s, Cost{0}});
      }
    }

    // Insertion order within a node's list follows `pending`, matching the
    // order edges were added.
    for (const Pending& p : pending) {
      ++first_[p.from + 1];
      ++first_[p.to + 1];
    }
    std::partial_sum(first_.begin(), first_.end(), first_.begin());
    std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
    arcs_.resize(2 * pending.size());
    std::vector<std::size_t> forward(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const Pending& p = pending[i];
      const std::size_t fwd = fill[p.from]++;
      const std::size_t rev = fill[p.to]++;
      arcs_[fwd] = {static_cast<std::uint32_t>(p.to), static_cast<std::uint32_t>(rev),
                    p.capacity, p.cost};
      arcs_[rev] = {static_cast<std::uint32_t>(p.from), static_cast<std::uint32_t>(fwd), 0,
                    -p.cost};
      forward[i] = fwd;
    }
    edge_arc_.assign(net.edges().size(), kNoArc);
    for (EdgeId e = 0; e < net.edges().size(); ++e) {
      if (pending_of_edge[e] != kNoArc) edge_arc_[e] = forward[pending_of_edge[e]];
    }
    if constexpr (std::is_floating_point_v<Cost>) {
      tolerance_ = kDistanceTolerance * std::max(Cost{1}, max_cost);
    }
  }

  FlowSolution<Cost> run() {
    std::int64_t sent = 0;
    while (sent < required_ && shortest_paths()) {
      while (sent < required_ && level_graph()) {
        next_arc_.assign(first_.begin(), first_.end() - 1);
        while (std::int64_t pushed = augment(source_, required_ - sent)) {
          sent += pushed;
        }
      }
    }
    FlowSolution<Cost> sol;
    sol.flow.assign(net_.edges().size(), 0);
    if (sent < required_) return sol;
    Cost total{0};
    for (EdgeId e = 0; e < edge_arc_.size(); ++e) {
      if (edge_arc_[e] == kNoArc) continue;
      const Arc<Cost>& fwd = arcs_[edge_arc_[e]];
      sol.flow[e] = arcs_[fwd.reverse].residual;
      total += static_cast<Cost>(sol.flow[e]) * fwd.cost;
    }
    sol.total_cost = total;
    return sol;
  }

 private:
  static constexpr std::size_t kNoArc = std::numeric_limits<std::size_t>::max();

  std::size_t node_count() const { return first_.size() - 1; }

  Cost reduced(NodeId from, const Arc<Cost>& arc) const {
    return arc.cost + potential_[from] - potential_[arc.to];
  }

  bool admissible(NodeId from, const Arc<Cost>& arc) const {
    if (arc.residual <= 0) return false;
    if constexpr (std::is_floating_point_v<Cost>) {
      return reduced(from, arc) <= tolerance_;
    } else {
      return reduced(from, arc) == 0;
    }
  }

  // Dijkstra on reduced costs; ties pop the lowest node index first. Stops
  // once the sink is settled: every unsettled node then has distance at
  // least dist[sink], which is all the potential update needs.
  // Returns false when the sink is unreachable.
  bool shortest_paths() {
    const std::size_t n = node_count();
    dist_.assign(n, kUnreachable<Cost>);
    using Entry = std::pair<Cost, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist_[source_] = Cost{0};
    heap.emplace(Cost{0}, source_);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist_[u]) continue;
      if (u == sink_) break;
      const Cost pu = potential_[u];
      for (std::size_t a = first_[u]; a < first_[u + 1]; ++a) {
        const Arc<Cost>& arc = arcs_[a];
        if (arc.residual <= 0) continue;
        const Cost step = std::max(Cost{0}, arc.cost + pu - potential_[arc.to]);
        if (d + step < dist_[arc.to]) {
          dist_[arc.to] = d + step;
          heap.emplace(dist_[arc.to], arc.to);
        }
      }
    }
    const Cost reach = dist_[sink_];
    if (reach == kUnreachable<Cost>) return false;
    for (std::size_t v = 0; v < n; ++v) {
      potential_[v] += std::min(dist_[v], reach);
    }
    return true;
  }

  bool level_graph() {
    level_.assign(node_count(), -1);
    std::queue<NodeId> queue;
    level_[source_] = 0;
    queue.push(source_);
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop();
      for (std::size_t a = first_[u]; a < first_[u + 1]; ++a) {
        const Arc<Cost>& arc = arcs_[a];
        if (level_[arc.to] < 0 && admissible(u, arc)) {
          level_[arc.to] = level_[u] + 1;
          queue.push(arc.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  std::int64_t augment(NodeId u, std::int64_t limit) {
    if (u == sink_) return limit;
    for (std::size_t& a = next_arc_[u]; a < first_[u + 1]; ++a) {
      Arc<Cost>& arc = arcs_[a];
      if (level_[arc.to] != level_[u] + 1 || !admissible(u, arc)) continue;
      const std::int64_t pushed = augment(arc.to, std::min(limit, arc.residual));
      if (pushed > 0) {
        arc.residual -= pushed;
        arcs_[arc.reverse].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  const FlowNetwork<Cost>& net_;
  NodeId source_;
  NodeId sink_;
  std::vector<Arc<Cost>> arcs_;
  std::vector<std::size_t> first_;  // arcs of node v: [first_[v], first_[v+1])
  std::vector<std::size_t> edge_arc_;
  std::vector<Cost> potential_;
  std::vector<Cost> dist_;
  std::vector<int> level_;
  std::vector<std::size_t> next_arc_;
  std::int64_t required_ = 0;
  Cost tolerance_{0};
};

template <typename Cost>
bool costs_agree(Cost reported, Cost recomputed) {
  if constexpr (std::is_floating_point_v<Cost>) {
    const Cost scale = std::max({Cost{1}, std::abs(reported),
                                 std::abs(recomputed)});
    return std::abs(reported - recomputed) <= kDistanceTolerance * scale;
  } else {
    return reported == recomputed;
  }
}

}  // namespace

template <typename Cost>
FlowSolution<Cost> solve(const FlowNetwork<Cost>& net) {
  const std::int64_t balance = std::accumulate(
      net.supplies().begin(), net.supplies().end(), std::int64_t{0});
  if (balance != 0) throw Error("supplies and demands do not balance");
  return Solver<Cost>(net).run();
}

template <typename Cost>
bool validate(const FlowNetwork<Cost>& net, const FlowSolution<Cost>& sol) {
  if (!sol.feasible() || sol.flow.size() != net.edges().size()) return false;
  std::vector<std::int64_t> excess(net.node_count(), 0);
  Cost total{0};
  for (EdgeId e = 0; e < net.edges().size(); ++e) {
    const auto& edge = net.edges()[e];
    const std::int64_t f = sol.flow[e];
    if (f < 0 || f > edge.capacity) return false;
    if (f == 0) continue;
    if (edge.infinite()) return false;
    excess[edge.from] -= f;
    excess[edge.to] += f;
    total += static_cast<Cost>(f) * *edge.cost;
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (excess[v] != -net.supply(v)) return false;
  }
  return costs_agree(*sol.total_cost, total);
}

template FlowSolution<std::int64_t> solve(const FlowNetwork<std::int64_t>&);
template FlowSolution<double> solve(const FlowNetwork<double>&);
template bool validate(const FlowNetwork<std::int64_t>&,
                       const FlowSolution<std::int64_t>&);
template bool validate(const FlowNetwork<double>&, const FlowSolution<double>&);

}  // namespace fairlet::mcf
