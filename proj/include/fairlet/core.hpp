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

// Colored metric point sets, clusterings, and the two clustering objectives
// (k-center and k-median) together with exact balance arithmetic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace fairlet {

using PointId = std::size_t;

/// Exact rational used for balance values and thresholds. Always stored
/// reduced with a positive denominator.
using Rational = boost::rational<std::int64_t>;

/// Absolute tolerance for distance comparisons where ties matter.
inline constexpr double kDistanceTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the requested balance cannot be met by the input colors.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

enum class Color : std::uint8_t { kRed, kBlue };

enum class MetricKind : std::uint8_t { kEuclidean, kExplicit };

enum class Objective : std::uint8_t { kCenter, kMedian };

const char* to_string(Color color);
const char* to_string(Objective objective);

/// A finite metric space whose points are colored red or blue.
///
/// Points are identified by their index 0..n-1. The metric is either the
/// Euclidean distance between coordinate vectors or an explicit symmetric
/// matrix, validated on construction (zero diagonal, symmetry, triangle
/// inequality up to 1e-9). Instances are immutable.
class ColoredDataset {
 public:
  static ColoredDataset euclidean(std::vector<Color> colors,
                                  const std::vector<std::vector<double>>& coords);
  static ColoredDataset explicit_metric(
      std::vector<Color> colors, const std::vector<std::vector<double>>& matrix);

  std::size_t size() const { return colors_.size(); }
  MetricKind metric_kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }

  Color color(PointId id) const;
  std::span<const Color> colors() const { return colors_; }
  std::span<const double> coords(PointId id) const;

  std::size_t count(Color color) const;
  std::vector<PointId> ids_of(Color color) const;
  std::vector<PointId> all_ids() const;

  double distance(PointId i, PointId j) const;

 private:
  ColoredDataset() = default;
  void check_id(PointId id) const;

  std::vector<Color> colors_;
  MetricKind kind_ = MetricKind::kEuclidean;
  std::size_t dim_ = 0;
  std::vector<double> coords_;  // row-major n x dim_
  std::vector<double> matrix_;  // row-major n x n, explicit metric only
};

inline double distance(const ColoredDataset& ds, PointId i, PointId j) {
  return ds.distance(i, j);
}

/// A k-clustering of some subset of a dataset: an explicit assignment
/// function plus (optionally) one center per cluster.
class Clustering {
 public:
  /// `points[i]` is assigned to cluster `labels[i]`. `centers` is either
  /// empty or has exactly k entries.
  Clustering(std::size_t k, std::vector<PointId> points,
             std::vector<std::size_t> labels,
             std::vector<PointId> centers = {});

  std::size_t k() const { return k_; }
  std::span<const PointId> points() const { return points_; }
  std::span<const std::size_t> labels() const { return labels_; }
  std::span<const PointId> centers() const { return centers_; }
  bool has_centers() const { return !centers_.empty(); }

  /// Member lists indexed by cluster label (some may be empty).
  std::vector<std::vector<PointId>> clusters() const;
  std::size_t nonempty_cluster_count() const;

 private:
  std::size_t k_;
  std::vector<PointId> points_;
  std::vector<std::size_t> labels_;
  std::vector<PointId> centers_;
};

/// min(#red/#blue, #blue/#red); 0 when either color is absent.
Rational balance_of_counts(std::size_t red, std::size_t blue);
Rational balance_of_subset(const ColoredDataset& ds,
                           std::span<const PointId> subset);
Rational balance_of_dataset(const ColoredDataset& ds);
/// Minimum balance over the nonempty clusters; empty clusters are ignored.
Rational balance_of_clustering(const ColoredDataset& ds, const Clustering& c);

/// k-center objective. With centers, the largest distance from a point to
/// the center of its cluster; without, the definitional form choosing the
/// best in-cluster center for each cluster.
double kcenter_cost(const ColoredDataset& ds, const Clustering& c);
/// k-median objective, same conventions as kcenter_cost with a sum.
double kmedian_cost(const ColoredDataset& ds, const Clustering& c);
double clustering_cost(const ColoredDataset& ds, const Clustering& c,
                       Objective objective);

std::string to_string(const Rational& value);
double to_double(const Rational& value);

}  // namespace fairlet
