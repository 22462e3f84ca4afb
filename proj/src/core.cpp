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

#include "fairlet/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fairlet {

const char* to_string(Color color) {
  return color == Color::kRed ? "red" : "blue";
}

const char* to_string(Objective objective) {
  return objective == Objective::kCenter ? "center" : "median";
}

ColoredDataset ColoredDataset::euclidean(
    std::vector<Color> colors, const std::vector<std::vector<double>>& coords) {
  if (colors.empty()) throw Error("dataset must contain at least one point");
  if (coords.size() != colors.size()) {
    throw Error("coordinate rows do not match the number of colors");
  }
  ColoredDataset ds;
  ds.kind_ = MetricKind::kEuclidean;
  ds.dim_ = coords.front().size();
  ds.coords_.reserve(ds.dim_ * coords.size());
  for (const auto& row : coords) {
    if (row.size() != ds.dim_) throw Error("ragged coordinate rows");
    for (double v : row) {
      if (!std::isfinite(v)) throw Error("non-finite coordinate");
      ds.coords_.push_back(v);
    }
  }
  ds.colors_ = std::move(colors);
  return ds;
}

ColoredDataset ColoredDataset::explicit_metric(
    std::vector<Color> colors, const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = colors.size();
  if (n == 0) throw Error("dataset must contain at least one point");
  if (matrix.size() != n) throw Error("distance matrix must be n x n");
  ColoredDataset ds;
  ds.kind_ = MetricKind::kExplicit;
  ds.matrix_.reserve(n * n);
  for (const auto& row : matrix) {
    if (row.size() != n) throw Error("distance matrix must be n x n");
    ds.matrix_.insert(ds.matrix_.end(), row.begin(), row.end());
  }
  auto at = [&](std::size_t i, std::size_t j) { return ds.matrix_[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw Error("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(at(i, j)) || at(i, j) < 0.0) {
        throw Error("distances must be finite and nonnegative");
      }
      if (at(i, j) != at(j, i)) throw Error("distance matrix is not symmetric");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t m = 0; m < n; ++m) {
        if (at(i, j) > at(i, m) + at(m, j) + kDistanceTolerance) {
          throw Error("distance matrix violates the triangle inequality");
        }
      }
    }
  }
  ds.colors_ = std::move(colors);
  return ds;
}

void ColoredDataset::check_id(PointId id) const {
  if (id >= colors_.size()) {
    throw Error("point id " + std::to_string(id) + " out of range");
  }
}

Color ColoredDataset::color(PointId id) const {
  check_id(id);
  return colors_[id];
}

std::span<const double> ColoredDataset::coords(PointId id) const {
  check_id(id);
  if (kind_ != MetricKind::kEuclidean) return {};
  return std::span<const double>(coords_).subspan(id * dim_, dim_);
}

std::size_t ColoredDataset::count(Color color) const {
  return static_cast<std::size_t>(
      std::count(colors_.begin(), colors_.end(), color));
}

std::vector<PointId> ColoredDataset::ids_of(Color color) const {
  std::vector<PointId> ids;
  for (PointId i = 0; i < colors_.size(); ++i) {
    if (colors_[i] == color) ids.push_back(i);
  }
  return ids;
}

std::vector<PointId> ColoredDataset::all_ids() const {
  std::vector<PointId> ids(colors_.size());
  for (PointId i = 0; i < ids.size(); ++i) ids[i] = i;
  return ids;
}

double ColoredDataset::distance(PointId i, PointId j) const {
  check_id(i);
  check_id(j);
  if (i == j) return 0.0;
  if (kind_ == MetricKind::kExplicit) return matrix_[i * colors_.size() + j];
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  double sum = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

Clustering::Clustering(std::size_t k, std::vector<PointId> points,
                       std::vector<std::size_t> labels,
                       std::vector<PointId> centers)
    : k_(k),
      points_(std::move(points)),
      labels_(std::move(labels)),
      centers_(std::move(centers)) {
  if (k_ == 0) throw Error("clustering needs k >= 1");
  if (points_.size() != labels_.size()) {
    throw Error("every point needs exactly one label");
  }
  if (!centers_.empty() && centers_.size() != k_) {
    throw Error("centers must be absent or exactly k");
  }
  for (std::size_t label : labels_) {
    if (label >= k_) throw Error("cluster label out of range");
  }
  std::vector<PointId> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("point assigned more than once");
  }
}

std::vector<std::vector<PointId>> Clustering::clusters() const {
  std::vector<std::vector<PointId>> out(k_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    out[labels_[i]].push_back(points_[i]);
  }
  return out;
}

std::size_t Clustering::nonempty_cluster_count() const {
  std::vector<bool> seen(k_, false);
  for (std::size_t label : labels_) seen[label] = true;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

Rational balance_of_counts(std::size_t red, std::size_t blue) {
  if (red == 0 || blue == 0) return Rational(0);
  const auto lo = static_cast<std::int64_t>(std::min(red, blue));
  const auto hi = static_cast<std::int64_t>(std::max(red, blue));
  return Rational(lo, hi);
}

Rational balance_of_subset(const ColoredDataset& ds,
                           std::span<const PointId> subset) {
  if (subset.empty()) throw Error("balance of an empty set is undefined");
  std::size_t red = 0;
  for (PointId id : subset) {
    if (ds.color(id) == Color::kRed) ++red;
  }
  return balance_of_counts(red, subset.size() - red);
}

Rational balance_of_dataset(const ColoredDataset& ds) {
  return balance_of_counts(ds.count(Color::kRed), ds.count(Color::kBlue));
}

Rational balance_of_clustering(const ColoredDataset& ds, const Clustering& c) {
  bool any = false;
  Rational best(1);
  for (const auto& members : c.clusters()) {
    if (members.empty()) continue;
    any = true;
    best = std::min(best, balance_of_subset(ds, members));
  }
  if (!any) throw Error("clustering has no nonempty cluster");
  return best;
}

namespace {

template <typename Combine>
double evaluate(const ColoredDataset& ds, const Clustering& c,
                Combine combine) {
  double total = 0.0;
  if (c.has_centers()) {
    for (std::size_t i = 0; i < c.points().size(); ++i) {
      total = combine(total,
                      ds.distance(c.points()[i], c.centers()[c.labels()[i]]));
    }
    return total;
  }
  for (const auto& members : c.clusters()) {
    if (members.empty()) continue;
    double best = std::numeric_limits<double>::infinity();
    for (PointId candidate : members) {
      double cost = 0.0;
      for (PointId x : members) cost = combine(cost, ds.distance(x, candidate));
      best = std::min(best, cost);
    }
    total = combine(total, best);
  }
  return total;
}

}  // namespace

double kcenter_cost(const ColoredDataset& ds, const Clustering& c) {
  return evaluate(ds, c, [](double a, double b) { return std::max(a, b); });
}

double kmedian_cost(const ColoredDataset& ds, const Clustering& c) {
  return evaluate(ds, c, [](double a, double b) { return a + b; });
}

double clustering_cost(const ColoredDataset& ds, const Clustering& c,
                       Objective objective) {
  return objective == Objective::kCenter ? kcenter_cost(ds, c)
                                         : kmedian_cost(ds, c);
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

double to_double(const Rational& value) {
  return boost::rational_cast<double>(value);
}

}  // namespace fairlet
