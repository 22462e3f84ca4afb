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

#pragma once

// Integral min-cost flow with node supplies.
//
// The solver runs successive shortest paths with node potentials: each phase
// computes shortest reduced-cost distances with Dijkstra, updates the
// potentials, and then saturates the zero-reduced-cost subgraph with a
// blocking flow before the next Dijkstra. Costs must be nonnegative. Edges
// with infinite cost (an empty optional) stay in the model but are never
// used.
//
// Cost is std::int64_t for exact unit-cost networks or double for geometric
// costs; both are explicitly instantiated.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fairlet::mcf {

using NodeId = std::size_t;
using EdgeId = std::size_t;

template <typename Cost>
struct Edge {
  NodeId from;
  NodeId to;
  std::int64_t capacity;
  std::optional<Cost> cost;  // nullopt means infinite

  bool infinite() const { return !cost.has_value(); }
};

template <typename Cost>
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t node_count);

  EdgeId add_edge(NodeId from, NodeId to, std::int64_t capacity,
                  std::optional<Cost> cost);
  /// Positive values are supplies, negative values demands.
  void set_supply(NodeId node, std::int64_t supply);

  std::size_t node_count() const { return supply_.size(); }
  std::span<const Edge<Cost>> edges() const { return edges_; }
  const Edge<Cost>& edge(EdgeId id) const { return edges_.at(id); }
  std::int64_t supply(NodeId node) const { return supply_.at(node); }
  std::span<const std::int64_t> supplies() const { return supply_; }

 private:
  std::vector<Edge<Cost>> edges_;
  std::vector<std::int64_t> supply_;
};

template <typename Cost>
struct FlowSolution {
  std::vector<std::int64_t> flow;  // indexed by EdgeId
  std::optional<Cost> total_cost;  // nullopt means infeasible

  bool feasible() const { return total_cost.has_value(); }
};

/// Minimum-cost feasible integral flow, or an infeasible solution (all-zero
/// flow, no cost) when the supplies cannot be routed. Throws fairlet::Error
/// when supplies do not sum to zero or a cost is negative.
template <typename Cost>
FlowSolution<Cost> solve(const FlowNetwork<Cost>& net);

/// True iff the solution is feasible, respects capacities, never uses an
/// infinite edge, conserves flow at every node, and reports the cost its
/// flows add up to (exactly for integer costs, within 1e-9 relative for
/// doubles).
template <typename Cost>
bool validate(const FlowNetwork<Cost>& net, const FlowSolution<Cost>& sol);

extern template class FlowNetwork<std::int64_t>;
extern template class FlowNetwork<double>;

}  // namespace fairlet::mcf
