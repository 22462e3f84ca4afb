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

// Matching primitives on the complete bichromatic bipartite graph.

#include <cstddef>
#include <utility>
#include <vector>

#include "fairlet/core.hpp"

namespace fairlet::matching {

/// Complete bipartite graph between blue (left) and red (right) points with
/// a dense weight matrix.
class BipartiteGraph {
 public:
  BipartiteGraph(std::vector<PointId> left, std::vector<PointId> right,
                 std::vector<double> weights);

  /// Blue points on the left, red on the right, weights from the metric.
  static BipartiteGraph bichromatic(const ColoredDataset& ds);

  const std::vector<PointId>& left() const { return left_; }
  const std::vector<PointId>& right() const { return right_; }
  /// Weight between the l-th left and r-th right vertex (positions, not ids).
  double weight(std::size_t l, std::size_t r) const {
    return weights_[l * right_.size() + r];
  }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<PointId> left_;
  std::vector<PointId> right_;
  std::vector<double> weights_;
};

struct Matching {
  /// (left id, right id), sorted by left id.
  std::vector<std::pair<PointId, PointId>> pairs;

  std::size_t size() const { return pairs.size(); }
};

/// Maximum-cardinality matching using only edges of weight <= tau
/// (Hopcroft-Karp).
Matching max_matching_under_threshold(const BipartiteGraph& g, double tau);

struct BottleneckResult {
  Matching matching;
  double bottleneck;
};

/// Perfect matching minimizing the largest edge weight. Binary search over
/// the sorted distinct weights, testing each threshold graph for a perfect
/// matching.
BottleneckResult bottleneck_perfect_matching(const BipartiteGraph& g);

struct MinCostResult {
  Matching matching;
  double total_cost;
};

/// Perfect matching minimizing the total weight (Hungarian method with
/// potentials, O(n^3)).
MinCostResult min_cost_perfect_matching(const BipartiteGraph& g);

}  // namespace fairlet::matching
