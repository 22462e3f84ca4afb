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

#include "fairlet/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace fairlet::matching {

namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

void require_perfect_shape(const BipartiteGraph& g) {
  if (g.left().empty()) throw Error("matching needs at least one vertex per side");
  if (g.left().size() != g.right().size()) {
    throw Error("perfect matching needs equally many blue and red points");
  }
}

// Hopcroft-Karp over the threshold graph. Adjacency lists follow right
// position order, so the result is deterministic.
class HopcroftKarp {
 public:
  HopcroftKarp(const BipartiteGraph& g, double tau)
      : adj_(g.left().size()),
        match_left_(g.left().size(), kUnmatched),
        match_right_(g.right().size(), kUnmatched),
        dist_(g.left().size()) {
    for (std::size_t l = 0; l < g.left().size(); ++l) {
      for (std::size_t r = 0; r < g.right().size(); ++r) {
        if (g.weight(l, r) <= tau) adj_[l].push_back(r);
      }
    }
  }

  std::size_t run() {
    std::size_t size = 0;
    while (bfs()) {
      for (std::size_t l = 0; l < adj_.size(); ++l) {
        if (match_left_[l] == kUnmatched && dfs(l)) ++size;
      }
    }
    return size;
  }

  const std::vector<std::size_t>& match_left() const { return match_left_; }

 private:
  bool bfs() {
    std::queue<std::size_t> queue;
    bool found = false;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      if (match_left_[l] == kUnmatched) {
        dist_[l] = 0;
        queue.push(l);
      } else {
        dist_[l] = kUnmatched;
      }
    }
    while (!queue.empty()) {
      const std::size_t l = queue.front();
      queue.pop();
      for (std::size_t r : adj_[l]) {
        const std::size_t next = match_right_[r];
        if (next == kUnmatched) {
          found = true;
        } else if (dist_[next] == kUnmatched) {
          dist_[next] = dist_[l] + 1;
          queue.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      const std::size_t next = match_right_[r];
      if (next == kUnmatched || (dist_[next] == dist_[l] + 1 && dfs(next))) {
        match_left_[l] = r;
        match_right_[r] = l;
        return true;
      }
    }
    dist_[l] = kUnmatched;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> dist_;
};

Matching to_matching(const BipartiteGraph& g,
                     const std::vector<std::size_t>& match_left) {
  Matching m;
  for (std::size_t l = 0; l < match_left.size(); ++l) {
    if (match_left[l] != kUnmatched) {
      m.pairs.emplace_back(g.left()[l], g.right()[match_left[l]]);
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::vector<PointId> left,
                               std::vector<PointId> right,
                               std::vector<double> weights)
    : left_(std::move(left)), right_(std::move(right)),
      weights_(std::move(weights)) {
  if (weights_.size() != left_.size() * right_.size()) {
    throw Error("weight matrix does not match the vertex counts");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error("bipartite weights must be nonnegative");
  }
}

BipartiteGraph BipartiteGraph::bichromatic(const ColoredDataset& ds) {
  std::vector<PointId> blue = ds.ids_of(Color::kBlue);
  std::vector<PointId> red = ds.ids_of(Color::kRed);
  std::vector<double> weights;
  weights.reserve(blue.size() * red.size());
  for (PointId b : blue) {
    for (PointId r : red) weights.push_back(ds.distance(b, r));
  }
  return BipartiteGraph(std::move(blue), std::move(red), std::move(weights));
}

Matching max_matching_under_threshold(const BipartiteGraph& g, double tau) {
  HopcroftKarp hk(g, tau);
  hk.run();
  return to_matching(g, hk.match_left());
}

BottleneckResult bottleneck_perfect_matching(const BipartiteGraph& g) {
  require_perfect_shape(g);
  std::vector<double> candidates = g.weights();
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  // The largest weight always admits a perfect matching (complete graph).
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    HopcroftKarp hk(g, candidates[mid]);
    if (hk.run() == g.left().size()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  HopcroftKarp hk(g, candidates[lo]);
  hk.run();
  return {to_matching(g, hk.match_left()), candidates[lo]};
}

MinCostResult min_cost_perfect_matching(const BipartiteGraph& g) {
  require_perfect_shape(g);
  const std::size_t n = g.left().size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based Kuhn-Munkres with row/column potentials; column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    row_of[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = row_of[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = g.weight(r0 - 1, col - 1) - u[r0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[row_of[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (row_of[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      row_of[col0] = row_of[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> match_left(n, kUnmatched);
  double total = 0.0;
  for (std::size_t col = 1; col <= n; ++col) {
    match_left[row_of[col] - 1] = col - 1;
  }
  for (std::size_t l = 0; l < n; ++l) total += g.weight(l, match_left[l]);
  return {to_matching(g, match_left), total};
}

}  // namespace fairlet::matching
