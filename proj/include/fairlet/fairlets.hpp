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

// Fairlet decompositions: small balanced clusters that partition the input
// and whose centers are then clustered by a classical algorithm.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairlet/core.hpp"
#include "fairlet/mcf.hpp"

namespace fairlet {

struct Fairlet {
  std::vector<PointId> members;  // sorted ascending
  PointId center;
};

/// A partition of all dataset ids into fairlets, each of size at most b + r
/// and balance at least b / r. Construction validates both conditions.
class FairletDecomposition {
 public:
  FairletDecomposition(const ColoredDataset& ds, std::vector<Fairlet> fairlets,
                       std::int64_t b, std::int64_t r);

  std::span<const Fairlet> fairlets() const { return fairlets_; }
  std::size_t size() const { return fairlets_.size(); }
  /// Index of the fairlet containing `id`.
  std::size_t beta(PointId id) const { return beta_.at(id); }
  std::vector<PointId> centers() const;
  std::int64_t b() const { return b_; }
  std::int64_t r() const { return r_; }

 private:
  std::vector<Fairlet> fairlets_;
  std::vector<std::size_t> beta_;
  std::int64_t b_;
  std::int64_t r_;
};

/// Sum (median) or max (center) over points of the distance to the center of
/// their fairlet. The span overload accepts any fairlet list, balanced or not.
double decomposition_cost(const ColoredDataset& ds,
                          std::span<const Fairlet> fairlets,
                          Objective objective);
double decomposition_cost(const ColoredDataset& ds,
                          const FairletDecomposition& dec, Objective objective);

/// Optimal (1,1) decomposition for k-center from a bottleneck perfect
/// matching; each pair is centered at its lower id.
FairletDecomposition decompose_11_center(const ColoredDataset& ds);
/// Optimal (1,1) decomposition for k-median from a min-cost perfect matching.
FairletDecomposition decompose_11_median(const ColoredDataset& ds);

/// Node layout of the (1,t') flow network.
///
///   0                      source of spare blue capacity
///   1                      sink for spare red capacity
///   2 .. 2+|B|-1           blue points, in increasing id order
///   2+|B| .. 1+|B|+|R|     red points, in increasing id order
///   then |B| * t' blue copies (blue i, copy j at blue_copy(i, j)),
///   then |R| * t' red copies.
///
/// Edges: source->sink (cap min(|B|,|R|)); source->blue and red->sink
/// (cap t'-1); blue->its copies and red copies->red (cap 1); and one cap-1
/// edge from every blue copy to every red copy, listed in `copy_edges`.
template <typename Cost>
struct FairletNetwork {
  struct CopyEdge {
    mcf::EdgeId edge;
    std::size_t blue;  // position in blue_ids
    std::size_t red;   // position in red_ids
  };

  mcf::FlowNetwork<Cost> net;
  std::int64_t t_prime;
  std::vector<PointId> blue_ids;
  std::vector<PointId> red_ids;
  std::vector<CopyEdge> copy_edges;

  static constexpr mcf::NodeId kSource = 0;
  static constexpr mcf::NodeId kSink = 1;
  mcf::NodeId blue_node(std::size_t i) const { return 2 + i; }
  mcf::NodeId red_node(std::size_t i) const { return 2 + blue_ids.size() + i; }
  mcf::NodeId blue_copy(std::size_t i, std::size_t j) const;
  mcf::NodeId red_copy(std::size_t i, std::size_t j) const;
};

/// k-center network for threshold tau: copy edges cost 1 when the pair is
/// within tau and are infinite otherwise.
FairletNetwork<std::int64_t> build_center_network(const ColoredDataset& ds,
                                                  std::int64_t t_prime,
                                                  double tau);
/// k-median network: copy edges cost the pair distance.
FairletNetwork<double> build_median_network(const ColoredDataset& ds,
                                            std::int64_t t_prime);

/// Reads the fairlets off a feasible flow: the bichromatic pairs carrying
/// flow form a graph whose components are stars with 1..t' leaves. Each
/// star becomes a fairlet centered at its hub (lower id on a tie). Pairs
/// whose endpoints are both covered elsewhere are dropped first, which can
/// only happen on zero-cost ties and never raises the cost.
template <typename Cost>
FairletDecomposition extract_stars(const ColoredDataset& ds,
                                   const FairletNetwork<Cost>& network,
                                   const mcf::FlowSolution<Cost>& sol);

/// Smallest threshold (0 or a bichromatic distance) whose k-center network
/// admits a feasible flow.
double center_threshold(const ColoredDataset& ds, std::int64_t t_prime);
/// (1,t') decomposition within twice the optimal k-center fairlet cost.
FairletDecomposition decompose_1t_center(const ColoredDataset& ds,
                                         std::int64_t t_prime);
/// (1,t') decomposition from a single min-cost flow on distance costs.
FairletDecomposition decompose_1t_median(const ColoredDataset& ds,
                                         std::int64_t t_prime);

/// Cost-oblivious constructive partition of a dataset whose balance is
/// exactly b / r into fairlets of size <= b + r and balance >= b / r.
FairletDecomposition balanced_partition(const ColoredDataset& ds,
                                        std::int64_t b, std::int64_t r);

struct DecompositionResult {
  FairletDecomposition decomposition;
  double cost;
};

inline constexpr std::size_t kMaxOraclePoints = 10;

/// Exhaustive optimum over all partitions into fairlets holding exactly one
/// point of one color and 1..t' points of the other, with the best center
/// per fairlet. At most kMaxOraclePoints points.
DecompositionResult brute_force_optimal_decomposition(const ColoredDataset& ds,
                                                      std::int64_t t_prime,
                                                      Objective objective);

/// Decomposition used by the fair clustering pipeline: matching based for
/// t' = 1, flow based otherwise. Fails fast with InfeasibleError when the
/// dataset balance is below 1/t'.
FairletDecomposition decompose(const ColoredDataset& ds, std::int64_t t_prime,
                               Objective objective);

}  // namespace fairlet
