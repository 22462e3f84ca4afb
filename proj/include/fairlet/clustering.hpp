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

// Classical k-center / k-median baselines, the fairlet reduction pipeline,
// and an exhaustive fair clustering oracle for small inputs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairlet/core.hpp"
#include "fairlet/fairlets.hpp"

namespace fairlet {

struct WeightedPoint {
  PointId id;
  std::int64_t weight;
};

/// Multiset of dataset points; weights are positive multiplicities.
class WeightedPointSet {
 public:
  WeightedPointSet(const ColoredDataset& ds, std::vector<WeightedPoint> entries);
  /// Every id once with weight 1.
  static WeightedPointSet uniform(const ColoredDataset& ds,
                                  std::span<const PointId> ids);
  /// Fairlet centers weighted by fairlet size.
  static WeightedPointSet fairlet_centers(const ColoredDataset& ds,
                                          const FairletDecomposition& dec);

  std::span<const WeightedPoint> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<WeightedPoint> entries_;
};

/// Greedy furthest-point k-center on `ids`: starts at the lowest id and adds
/// the point furthest from the chosen centers (lower id on ties). Points go
/// to their nearest center (lower center index on ties).
Clustering gonzalez_kcenter(const ColoredDataset& ds,
                            std::span<const PointId> ids, std::size_t k);

inline constexpr int kLocalSearchRestarts = 3;

/// Single-swap local search for weighted k-median. Each restart begins at k
/// distinct seeded-random medoids and applies the best improving swap until
/// none improves the objective by more than 1e-9 relative; the best of
/// kLocalSearchRestarts restarts is returned.
Clustering local_search_kmedian(const ColoredDataset& ds,
                                const WeightedPointSet& wps, std::size_t k,
                                std::uint64_t seed);

/// Sum of weight times distance to the nearest of `centers`.
double weighted_kmedian_cost(const ColoredDataset& ds,
                             const WeightedPointSet& wps,
                             std::span<const PointId> centers);

struct FairClustering {
  Clustering clustering;            // lifted assignment over every point
  FairletDecomposition decomposition;
  Clustering center_clustering;     // clustering of the fairlet centers
};

/// Clusters the fairlet centers of `dec` and lifts the result to all points.
/// k-center uses gonzalez_kcenter on the centers; k-median uses
/// local_search_kmedian on the centers weighted by fairlet size.
FairClustering cluster_fairlets(const ColoredDataset& ds,
                                FairletDecomposition dec, std::size_t k,
                                Objective objective, std::uint64_t seed);

/// Full reduction: fairlet decomposition for t', then cluster_fairlets.
FairClustering fair_cluster(const ColoredDataset& ds, std::size_t k,
                            std::int64_t t_prime, Objective objective,
                            std::uint64_t seed);

/// Cost of the fairlet-center multiset under the lifted clustering: each
/// center y_i counted |Y_i| times (median) or once (center) at its distance
/// to the center of its cluster.
double center_multiset_cost(const ColoredDataset& ds, const FairClustering& fc,
                            Objective objective);

struct ClusteringResult {
  Clustering clustering;
  double cost;
};

inline constexpr std::size_t kMaxFairOraclePoints = 10;
inline constexpr std::size_t kMaxFairOracleClusters = 3;

/// Exhaustive optimum over assignments into exactly k nonempty clusters
/// with every cluster balance >= t, best center per cluster.
ClusteringResult brute_force_fair_clustering(const ColoredDataset& ds,
                                             std::size_t k, Rational t,
                                             Objective objective);

}  // namespace fairlet
