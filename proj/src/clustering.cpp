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

#include "fairlet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fairlet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeImprovement = 1e-9;

// Dense distances among the entries of a weighted point set.
class DistanceTable {
 public:
  DistanceTable(const ColoredDataset& ds, std::span<const WeightedPoint> pts)
      : n_(pts.size()), table_(n_ * n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        table_[i * n_ + j] = table_[j * n_ + i] = ds.distance(pts[i].id, pts[j].id);
      }
    }
  }
  double operator()(std::size_t i, std::size_t j) const {
    return table_[i * n_ + j];
  }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

// Nearest and second-nearest center (positions into `centers`).
struct Nearest {
  std::size_t first;
  double d1;
  double d2;
};

std::vector<Nearest> nearest_centers(const DistanceTable& dist, std::size_t n,
                                     const std::vector<std::size_t>& centers) {
  std::vector<Nearest> out(n, Nearest{0, kInf, kInf});
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = dist(o, centers[c]);
      if (d < out[o].d1 - kDistanceTolerance) {
        out[o].d2 = out[o].d1;
        out[o].d1 = d;
        out[o].first = c;
      } else if (d < out[o].d2) {
        out[o].d2 = d;
      }
    }
  }
  return out;
}

double weighted_cost(std::span<const WeightedPoint> pts,
                     const std::vector<Nearest>& near) {
  double cost = 0.0;
  for (std::size_t o = 0; o < pts.size(); ++o) {
    cost += static_cast<double>(pts[o].weight) * near[o].d1;
  }
  return cost;
}

struct SwapSearch {
  std::vector<std::size_t> medoids;  // positions into the point set
  double cost;
};

// Best-improvement single swap. Removing medoid i and inserting h changes
// point o's distance to min(d(o,h), d2) if i is its nearest medoid and to
// min(d(o,h), d1) otherwise, so every removal choice for a fixed h is priced
// in one pass over the points.
SwapSearch swap_descent(std::span<const WeightedPoint> pts,
                        const DistanceTable& dist,
                        std::vector<std::size_t> medoids) {
  const std::size_t n = pts.size();
  const std::size_t k = medoids.size();
  std::vector<bool> is_medoid(n, false);
  for (std::size_t m : medoids) is_medoid[m] = true;
  auto near = nearest_centers(dist, n, medoids);
  double cost = weighted_cost(pts, near);
  std::vector<double> delta(k);

  while (cost > 0.0) {
    double best_delta = 0.0;
    std::size_t best_in = n;
    std::size_t best_out = k;
    for (std::size_t h = 0; h < n; ++h) {
      if (is_medoid[h]) continue;
      double shared = 0.0;
      std::fill(delta.begin(), delta.end(), 0.0);
      for (std::size_t o = 0; o < n; ++o) {
        const double w = static_cast<double>(pts[o].weight);
        const double doh = dist(o, h);
        const double kept = std::min(doh, near[o].d1) - near[o].d1;
        shared += w * kept;
        delta[near[o].first] += w * (std::min(doh, near[o].d2) - near[o].d1 - kept);
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (shared + delta[i] < best_delta) {
          best_delta = shared + delta[i];
          best_in = h;
          best_out = i;
        }
      }
    }
    if (best_in == n || -best_delta <= kRelativeImprovement * cost) break;
    is_medoid[medoids[best_out]] = false;
    is_medoid[best_in] = true;
    medoids[best_out] = best_in;
    near = nearest_centers(dist, n, medoids);
    cost = weighted_cost(pts, near);
  }
  return {std::move(medoids), cost};
}

Clustering nearest_assignment(const ColoredDataset& ds,
                              std::span<const PointId> ids,
                              std::vector<PointId> centers) {
  std::vector<PointId> points(ids.begin(), ids.end());
  std::vector<std::size_t> labels(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = kInf;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = ds.distance(points[i], centers[c]);
      if (d < best - kDistanceTolerance) {
        best = d;
        labels[i] = c;
      }
    }
  }
  const std::size_t k = centers.size();
  return Clustering(k, std::move(points), std::move(labels), std::move(centers));
}

}  // namespace

WeightedPointSet::WeightedPointSet(const ColoredDataset& ds,
                                   std::vector<WeightedPoint> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.weight < 1) throw Error("weights must be positive");
    if (e.id >= ds.size()) throw Error("weighted point id out of range");
  }
  std::vector<bool> seen(ds.size(), false);
  for (const auto& e : entries_) {
    if (seen[e.id]) throw Error("duplicate weighted point");
    seen[e.id] = true;
  }
}

WeightedPointSet WeightedPointSet::uniform(const ColoredDataset& ds,
                                           std::span<const PointId> ids) {
  std::vector<WeightedPoint> entries;
  entries.reserve(ids.size());
  for (PointId id : ids) entries.push_back({id, 1});
  return WeightedPointSet(ds, std::move(entries));
}

WeightedPointSet WeightedPointSet::fairlet_centers(
    const ColoredDataset& ds, const FairletDecomposition& dec) {
  std::vector<WeightedPoint> entries;
  entries.reserve(dec.size());
  for (const Fairlet& f : dec.fairlets()) {
    entries.push_back({f.center, static_cast<std::int64_t>(f.members.size())});
  }
  return WeightedPointSet(ds, std::move(entries));
}

Clustering gonzalez_kcenter(const ColoredDataset& ds,
                            std::span<const PointId> ids, std::size_t k) {
  if (k < 1 || k > ids.size()) throw Error("k out of range for k-center");
  std::vector<PointId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<PointId> centers{sorted.front()};
  std::vector<double> gap(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    gap[i] = ds.distance(sorted[i], centers.front());
  }
  while (centers.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (gap[i] > gap[far] + kDistanceTolerance) far = i;
    }
    centers.push_back(sorted[far]);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      gap[i] = std::min(gap[i], ds.distance(sorted[i], sorted[far]));
    }
  }
  return nearest_assignment(ds, ids, std::move(centers));
}

double weighted_kmedian_cost(const ColoredDataset& ds,
                             const WeightedPointSet& wps,
                             std::span<const PointId> centers) {
  if (centers.empty()) throw Error("need at least one center");
  double cost = 0.0;
  for (const auto& e : wps.entries()) {
    double best = kInf;
    for (PointId c : centers) best = std::min(best, ds.distance(e.id, c));
    cost += static_cast<double>(e.weight) * best;
  }
  return cost;
}

Clustering local_search_kmedian(const ColoredDataset& ds,
                                const WeightedPointSet& wps, std::size_t k,
                                std::uint64_t seed) {
  const std::size_t n = wps.size();
  if (k < 1 || k > n) throw Error("k out of range for k-median");
  const DistanceTable dist(ds, wps.entries());

  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  SwapSearch best{{}, kInf};
  for (int restart = 0; restart < kLocalSearchRestarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> start;
    start.reserve(k);
    std::sample(positions.begin(), positions.end(), std::back_inserter(start),
                static_cast<std::ptrdiff_t>(k), rng);
    SwapSearch found = swap_descent(wps.entries(), dist, std::move(start));
    if (found.cost < best.cost) best = std::move(found);
    if (k == n) break;
  }

  std::vector<PointId> centers;
  for (std::size_t m : best.medoids) centers.push_back(wps.entries()[m].id);
  std::vector<PointId> ids;
  for (const auto& e : wps.entries()) ids.push_back(e.id);
  return nearest_assignment(ds, ids, std::move(centers));
}

FairClustering cluster_fairlets(const ColoredDataset& ds,
                                FairletDecomposition dec, std::size_t k,
                                Objective objective, std::uint64_t seed) {
  if (k < 1 || k > dec.size()) {
    throw Error("k = " + std::to_string(k) + " exceeds the " +
                std::to_string(dec.size()) + " fairlets");
  }
  const std::vector<PointId> centers = dec.centers();
  Clustering on_centers =
      objective == Objective::kCenter
          ? gonzalez_kcenter(ds, centers, k)
          : local_search_kmedian(ds, WeightedPointSet::fairlet_centers(ds, dec),
                                 k, seed);

  // alpha(x) = alpha_Y(y_beta(x))
  std::vector<std::size_t> center_label(ds.size(), 0);
  for (std::size_t i = 0; i < on_centers.points().size(); ++i) {
    center_label[on_centers.points()[i]] = on_centers.labels()[i];
  }
  std::vector<PointId> points = ds.all_ids();
  std::vector<std::size_t> labels(points.size());
  for (PointId x : points) {
    labels[x] = center_label[dec.fairlets()[dec.beta(x)].center];
  }
  std::vector<PointId> cluster_centers(on_centers.centers().begin(),
                                       on_centers.centers().end());
  Clustering lifted(k, std::move(points), std::move(labels),
                    std::move(cluster_centers));
  return {std::move(lifted), std::move(dec), std::move(on_centers)};
}

FairClustering fair_cluster(const ColoredDataset& ds, std::size_t k,
                            std::int64_t t_prime, Objective objective,
                            std::uint64_t seed) {
  return cluster_fairlets(ds, decompose(ds, t_prime, objective), k, objective,
                          seed);
}

double center_multiset_cost(const ColoredDataset& ds, const FairClustering& fc,
                            Objective objective) {
  const auto centers = fc.clustering.centers();
  const auto& labels = fc.clustering.labels();
  double total = 0.0;
  for (const Fairlet& f : fc.decomposition.fairlets()) {
    // The lifted clustering lists every point at its own id.
    const double d = ds.distance(f.center, centers[labels[f.center]]);
    if (objective == Objective::kCenter) {
      total = std::max(total, d);
    } else {
      total += static_cast<double>(f.members.size()) * d;
    }
  }
  return total;
}

ClusteringResult brute_force_fair_clustering(const ColoredDataset& ds,
                                             std::size_t k, Rational t,
                                             Objective objective) {
  const std::size_t n = ds.size();
  if (n > kMaxFairOraclePoints || k > kMaxFairOracleClusters) {
    throw Error("brute-force fair clustering is limited to n <= 10, k <= 3");
  }
  if (k < 1 || k > n) throw Error("k out of range");

  std::vector<std::size_t> labels(n, 0);
  std::vector<std::size_t> best_labels;
  std::vector<PointId> best_centers;
  double best_cost = kInf;
  const std::vector<PointId> points = ds.all_ids();

  // Canonical labelings only: point i uses a label at most one above the
  // largest label among points 0..i-1.
  auto evaluate = [&] {
    Clustering candidate(k, points, labels);
    if (candidate.nonempty_cluster_count() != k) return;
    const auto clusters = candidate.clusters();
    for (const auto& members : clusters) {
      if (balance_of_subset(ds, members) < t) return;
    }
    double cost = 0.0;
    std::vector<PointId> centers;
    for (const auto& members : clusters) {
      double cluster_best = kInf;
      PointId center = members.front();
      for (PointId c : members) {
        double cc = 0.0;
        for (PointId x : members) {
          const double d = ds.distance(x, c);
          cc = objective == Objective::kCenter ? std::max(cc, d) : cc + d;
        }
        if (cc < cluster_best) {
          cluster_best = cc;
          center = c;
        }
      }
      centers.push_back(center);
      cost = objective == Objective::kCenter ? std::max(cost, cluster_best)
                                             : cost + cluster_best;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_labels = labels;
      best_centers = std::move(centers);
    }
  };

  auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == n) {
      if (used == k) evaluate();
      return;
    }
    if (used + (n - i) < k) return;
    const std::size_t limit = std::min(k, used + 1);
    for (std::size_t label = 0; label < limit; ++label) {
      labels[i] = label;
      self(self, i + 1, std::max(used, label + 1));
    }
  };
  recurse(recurse, 0, 0);

  if (best_labels.empty()) {
    throw InfeasibleError("no assignment into k clusters meets the balance");
  }
  return {Clustering(k, points, best_labels, best_centers), best_cost};
}

}  // namespace fairlet
