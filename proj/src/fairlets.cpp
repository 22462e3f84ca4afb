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

#include "fairlet/fairlets.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>

#include "fairlet/matching.hpp"

namespace fairlet {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

void require_both_colors(const ColoredDataset& ds) {
  if (ds.count(Color::kRed) == 0 || ds.count(Color::kBlue) == 0) {
    throw InfeasibleError("both colors must be present");
  }
}

void require_t_prime_feasible(const ColoredDataset& ds, std::int64_t t_prime) {
  if (t_prime < 1) throw Error("t' must be at least 1");
  require_both_colors(ds);
  if (balance_of_dataset(ds) < Rational(1, t_prime)) {
    throw InfeasibleError("dataset balance " + to_string(balance_of_dataset(ds)) +
                          " is below 1/" + std::to_string(t_prime));
  }
}

void require_equal_colors(const ColoredDataset& ds) {
  require_both_colors(ds);
  if (ds.count(Color::kRed) != ds.count(Color::kBlue)) {
    throw InfeasibleError("(1,1) fairlets need equally many red and blue points");
  }
}

Fairlet make_fairlet(std::vector<PointId> members, PointId center) {
  std::sort(members.begin(), members.end());
  return Fairlet{std::move(members), center};
}

FairletDecomposition pairs_to_decomposition(
    const ColoredDataset& ds, const matching::Matching& m) {
  std::vector<Fairlet> fairlets;
  fairlets.reserve(m.size());
  for (const auto& [blue, red] : m.pairs) {
    fairlets.push_back(make_fairlet({blue, red}, std::min(blue, red)));
  }
  return FairletDecomposition(ds, std::move(fairlets), 1, 1);
}

// Cost of a member set when centered at `center`.
double fairlet_cost(const ColoredDataset& ds, std::span<const PointId> members,
                    PointId center, Objective objective) {
  double cost = 0.0;
  for (PointId x : members) {
    const double d = ds.distance(x, center);
    cost = objective == Objective::kCenter ? std::max(cost, d) : cost + d;
  }
  return cost;
}

}  // namespace

FairletDecomposition::FairletDecomposition(const ColoredDataset& ds,
                                           std::vector<Fairlet> fairlets,
                                           std::int64_t b, std::int64_t r)
    : fairlets_(std::move(fairlets)),
      beta_(ds.size(), kUnassigned),
      b_(b),
      r_(r) {
  if (b_ < 1 || r_ < b_) throw Error("fairlet shape needs 1 <= b <= r");
  const Rational target(b_, r_);
  for (std::size_t f = 0; f < fairlets_.size(); ++f) {
    const Fairlet& fairlet = fairlets_[f];
    if (fairlet.members.empty()) throw Error("empty fairlet");
    if (!std::binary_search(fairlet.members.begin(), fairlet.members.end(),
                            fairlet.center)) {
      throw Error("fairlet center is not a member");
    }
    if (static_cast<std::int64_t>(fairlet.members.size()) > b_ + r_) {
      throw Error("fairlet larger than b + r");
    }
    if (balance_of_subset(ds, fairlet.members) < target) {
      throw Error("fairlet balance below b/r");
    }
    for (PointId id : fairlet.members) {
      if (id >= ds.size()) throw Error("fairlet member out of range");
      if (beta_[id] != kUnassigned) throw Error("point in two fairlets");
      beta_[id] = f;
    }
  }
  if (std::find(beta_.begin(), beta_.end(), kUnassigned) != beta_.end()) {
    throw Error("fairlets do not cover every point");
  }
}

std::vector<PointId> FairletDecomposition::centers() const {
  std::vector<PointId> out;
  out.reserve(fairlets_.size());
  for (const Fairlet& f : fairlets_) out.push_back(f.center);
  return out;
}

double decomposition_cost(const ColoredDataset& ds,
                          std::span<const Fairlet> fairlets,
                          Objective objective) {
  double total = 0.0;
  for (const Fairlet& f : fairlets) {
    const double cost = fairlet_cost(ds, f.members, f.center, objective);
    total = objective == Objective::kCenter ? std::max(total, cost)
                                            : total + cost;
  }
  return total;
}

double decomposition_cost(const ColoredDataset& ds,
                          const FairletDecomposition& dec,
                          Objective objective) {
  return decomposition_cost(ds, dec.fairlets(), objective);
}

FairletDecomposition decompose_11_center(const ColoredDataset& ds) {
  require_equal_colors(ds);
  const auto g = matching::BipartiteGraph::bichromatic(ds);
  return pairs_to_decomposition(ds, matching::bottleneck_perfect_matching(g).matching);
}

FairletDecomposition decompose_11_median(const ColoredDataset& ds) {
  require_equal_colors(ds);
  const auto g = matching::BipartiteGraph::bichromatic(ds);
  return pairs_to_decomposition(ds, matching::min_cost_perfect_matching(g).matching);
}

// --- flow network -----------------------------------------------------------

template <typename Cost>
mcf::NodeId FairletNetwork<Cost>::blue_copy(std::size_t i, std::size_t j) const {
  return 2 + blue_ids.size() + red_ids.size() +
         i * static_cast<std::size_t>(t_prime) + j;
}

template <typename Cost>
mcf::NodeId FairletNetwork<Cost>::red_copy(std::size_t i, std::size_t j) const {
  const auto copies = static_cast<std::size_t>(t_prime);
  return 2 + blue_ids.size() + red_ids.size() + blue_ids.size() * copies +
         i * copies + j;
}

namespace {

// `pair_cost(blue_id, red_id)` yields the copy-edge cost (nullopt = infinite).
template <typename Cost, typename PairCost>
FairletNetwork<Cost> build_network(const ColoredDataset& ds,
                                   std::int64_t t_prime, PairCost pair_cost) {
  if (t_prime < 2) throw Error("the flow construction needs t' >= 2");
  require_both_colors(ds);
  std::vector<PointId> blue = ds.ids_of(Color::kBlue);
  std::vector<PointId> red = ds.ids_of(Color::kRed);
  const std::size_t nb = blue.size();
  const std::size_t nr = red.size();
  const auto copies = static_cast<std::size_t>(t_prime);
  const std::size_t nodes = 2 + (nb + nr) * (1 + copies);

  FairletNetwork<Cost> fn{mcf::FlowNetwork<Cost>(nodes), t_prime,
                          std::move(blue), std::move(red), {}};
  auto& net = fn.net;
  using Net = FairletNetwork<Cost>;

  net.add_edge(Net::kSource, Net::kSink,
               static_cast<std::int64_t>(std::min(nb, nr)), Cost{0});
  for (std::size_t i = 0; i < nb; ++i) {
    net.add_edge(Net::kSource, fn.blue_node(i), t_prime - 1, Cost{0});
  }
  for (std::size_t i = 0; i < nr; ++i) {
    net.add_edge(fn.red_node(i), Net::kSink, t_prime - 1, Cost{0});
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < copies; ++j) {
      net.add_edge(fn.blue_node(i), fn.blue_copy(i, j), 1, Cost{0});
    }
  }
  // Red copies feed their red point so that flow can reach its demand.
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < copies; ++j) {
      net.add_edge(fn.red_copy(i, j), fn.red_node(i), 1, Cost{0});
    }
  }
  fn.copy_edges.reserve(nb * nr * copies * copies);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      const std::optional<Cost> cost = pair_cost(fn.blue_ids[bi], fn.red_ids[ri]);
      for (std::size_t k = 0; k < copies; ++k) {
        for (std::size_t l = 0; l < copies; ++l) {
          const mcf::EdgeId e =
              net.add_edge(fn.blue_copy(bi, k), fn.red_copy(ri, l), 1, cost);
          fn.copy_edges.push_back({e, bi, ri});
        }
      }
    }
  }

  net.set_supply(Net::kSource, static_cast<std::int64_t>(nr));
  net.set_supply(Net::kSink, -static_cast<std::int64_t>(nb));
  for (std::size_t i = 0; i < nb; ++i) net.set_supply(fn.blue_node(i), 1);
  for (std::size_t i = 0; i < nr; ++i) net.set_supply(fn.red_node(i), -1);
  return fn;
}

}  // namespace

FairletNetwork<std::int64_t> build_center_network(const ColoredDataset& ds,
                                                  std::int64_t t_prime,
                                                  double tau) {
  return build_network<std::int64_t>(
      ds, t_prime, [&](PointId b, PointId r) -> std::optional<std::int64_t> {
        if (ds.distance(b, r) <= tau) return 1;
        return std::nullopt;
      });
}

FairletNetwork<double> build_median_network(const ColoredDataset& ds,
                                            std::int64_t t_prime) {
  return build_network<double>(
      ds, t_prime, [&](PointId b, PointId r) -> std::optional<double> {
        return ds.distance(b, r);
      });
}

template <typename Cost>
FairletDecomposition extract_stars(const ColoredDataset& ds,
                                   const FairletNetwork<Cost>& network,
                                   const mcf::FlowSolution<Cost>& sol) {
  if (!sol.feasible()) throw Error("cannot extract fairlets from an infeasible flow");
  if (sol.flow.size() != network.net.edges().size()) {
    throw Error("flow does not belong to this network");
  }

  // Bichromatic pairs with positive flow on some copy edge, deduplicated.
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (const auto& ce : network.copy_edges) {
    if (sol.flow[ce.edge] > 0) used.emplace(ce.blue, ce.red);
  }

  const std::size_t nb = network.blue_ids.size();
  const std::size_t nr = network.red_ids.size();
  std::vector<std::size_t> blue_degree(nb, 0), red_degree(nr, 0);
  for (const auto& [b, r] : used) {
    ++blue_degree[b];
    ++red_degree[r];
  }

  // Drop redundant pairs, most expensive first. Degrees only shrink, so one
  // pass leaves no pair whose endpoints both have another neighbor.
  std::vector<std::pair<std::size_t, std::size_t>> order(used.begin(), used.end());
  std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
    return ds.distance(network.blue_ids[x.first], network.red_ids[x.second]) >
           ds.distance(network.blue_ids[y.first], network.red_ids[y.second]);
  });
  for (const auto& [b, r] : order) {
    if (blue_degree[b] >= 2 && red_degree[r] >= 2) {
      used.erase({b, r});
      --blue_degree[b];
      --red_degree[r];
    }
  }

  // Components: blue positions 0..nb-1, red positions nb..nb+nr-1.
  std::vector<std::size_t> parent(nb + nr);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [b, r] : used) parent[find(b)] = find(nb + r);

  auto point_of = [&](std::size_t v) {
    return v < nb ? network.blue_ids[v] : network.red_ids[v - nb];
  };
  auto degree_of = [&](std::size_t v) {
    return v < nb ? blue_degree[v] : red_degree[v - nb];
  };

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t v = 0; v < nb + nr; ++v) {
    if (degree_of(v) == 0) {
      throw Error("point " + std::to_string(point_of(v)) +
                  " is not covered by the flow");
    }
    components[find(v)].push_back(v);
  }

  std::vector<Fairlet> fairlets;
  fairlets.reserve(components.size());
  for (const auto& [root, nodes] : components) {
    std::size_t hub = nodes.front();
    for (std::size_t v : nodes) {
      const bool higher = degree_of(v) > degree_of(hub);
      const bool tie_lower =
          degree_of(v) == degree_of(hub) && point_of(v) < point_of(hub);
      if (higher || tie_lower) hub = v;
    }
    const std::size_t leaves = nodes.size() - 1;
    if (degree_of(hub) != leaves) throw Error("flow component is not a star");
    if (leaves < 1 || leaves > static_cast<std::size_t>(network.t_prime)) {
      throw Error("star has more than t' leaves");
    }
    std::vector<PointId> members;
    for (std::size_t v : nodes) members.push_back(point_of(v));
    fairlets.push_back(make_fairlet(std::move(members), point_of(hub)));
  }
  std::sort(fairlets.begin(), fairlets.end(), [](const Fairlet& a, const Fairlet& b) {
    return a.members.front() < b.members.front();
  });
  return FairletDecomposition(ds, std::move(fairlets), 1, network.t_prime);
}

template struct FairletNetwork<std::int64_t>;
template struct FairletNetwork<double>;
template FairletDecomposition extract_stars(const ColoredDataset&,
                                            const FairletNetwork<std::int64_t>&,
                                            const mcf::FlowSolution<std::int64_t>&);
template FairletDecomposition extract_stars(const ColoredDataset&,
                                            const FairletNetwork<double>&,
                                            const mcf::FlowSolution<double>&);

double center_threshold(const ColoredDataset& ds, std::int64_t t_prime) {
  if (t_prime < 2) throw Error("the flow construction needs t' >= 2");
  require_t_prime_feasible(ds, t_prime);
  std::vector<double> candidates{0.0};
  for (PointId b : ds.ids_of(Color::kBlue)) {
    for (PointId r : ds.ids_of(Color::kRed)) {
      candidates.push_back(ds.distance(b, r));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  auto feasible = [&](double tau) {
    return mcf::solve(build_center_network(ds, t_prime, tau).net).feasible();
  };
  if (!feasible(candidates.back())) {
    throw InfeasibleError("no threshold admits a feasible fairlet flow");
  }
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

FairletDecomposition decompose_1t_center(const ColoredDataset& ds,
                                         std::int64_t t_prime) {
  const double tau = center_threshold(ds, t_prime);
  const auto network = build_center_network(ds, t_prime, tau);
  return extract_stars(ds, network, mcf::solve(network.net));
}

FairletDecomposition decompose_1t_median(const ColoredDataset& ds,
                                         std::int64_t t_prime) {
  if (t_prime < 2) throw Error("the flow construction needs t' >= 2");
  require_t_prime_feasible(ds, t_prime);
  const auto network = build_median_network(ds, t_prime);
  const auto sol = mcf::solve(network.net);
  if (!sol.feasible()) throw InfeasibleError("fairlet flow network is infeasible");
  return extract_stars(ds, network, sol);
}

FairletDecomposition balanced_partition(const ColoredDataset& ds,
                                        std::int64_t b, std::int64_t r) {
  if (b < 1 || r < b) throw Error("balanced partition needs 1 <= b <= r");
  if (std::gcd(b, r) != 1) throw Error("b and r must be coprime");
  if (balance_of_dataset(ds) != Rational(b, r)) {
    throw InfeasibleError("dataset balance is " + to_string(balance_of_dataset(ds)) +
                          ", not " + std::to_string(b) + "/" + std::to_string(r));
  }
  // Work with the minority color as "blue"; ids are consumed lowest first.
  const bool blue_minority = ds.count(Color::kBlue) <= ds.count(Color::kRed);
  std::vector<PointId> minority = ds.ids_of(blue_minority ? Color::kBlue : Color::kRed);
  std::vector<PointId> majority = ds.ids_of(blue_minority ? Color::kRed : Color::kBlue);
  std::size_t next_min = 0;
  std::size_t next_maj = 0;

  std::vector<Fairlet> fairlets;
  auto take = [&](std::size_t n_min, std::size_t n_maj) {
    std::vector<PointId> members;
    for (std::size_t i = 0; i < n_min; ++i) members.push_back(minority[next_min++]);
    for (std::size_t i = 0; i < n_maj; ++i) members.push_back(majority[next_maj++]);
    const PointId center = *std::min_element(members.begin(), members.end());
    fairlets.push_back(make_fairlet(std::move(members), center));
  };

  const auto ub = static_cast<std::size_t>(b);
  const auto ur = static_cast<std::size_t>(r);
  while (next_min < minority.size() || next_maj < majority.size()) {
    const std::size_t left_min = minority.size() - next_min;
    const std::size_t left_maj = majority.size() - next_maj;
    if (left_min == left_maj) {
      while (next_min < minority.size()) take(1, 1);
    } else if (left_maj - left_min >= ur - ub) {
      take(ub, ur);
    } else {
      take(ub, left_maj - left_min + ub);
    }
  }
  return FairletDecomposition(ds, std::move(fairlets), b, r);
}

namespace {

// Depth-first enumeration of star-shaped fairlet partitions. The fairlet
// holding the lowest unassigned point is chosen at each level.
class DecompositionSearch {
 public:
  DecompositionSearch(const ColoredDataset& ds, std::int64_t t_prime,
                      Objective objective)
      : ds_(ds),
        max_size_(static_cast<std::size_t>(t_prime) + 1),
        objective_(objective),
        assigned_(ds.size(), false) {}

  bool run() {
    recurse(0.0);
    return found_;
  }
  double best_cost() const { return best_cost_; }
  std::vector<Fairlet> best() const { return best_; }

 private:
  double combine(double acc, double cost) const {
    return objective_ == Objective::kCenter ? std::max(acc, cost) : acc + cost;
  }

  bool is_star(const std::vector<PointId>& members) const {
    std::size_t red = 0;
    for (PointId id : members) red += ds_.color(id) == Color::kRed ? 1 : 0;
    const std::size_t blue = members.size() - red;
    return (red == 1 && blue >= 1) || (blue == 1 && red >= 1);
  }

  void recurse(double acc) {
    if (found_ && acc >= best_cost_) return;
    const auto first = std::find(assigned_.begin(), assigned_.end(), false);
    if (first == assigned_.end()) {
      found_ = true;
      best_cost_ = acc;
      best_ = current_;
      return;
    }
    const auto anchor = static_cast<PointId>(first - assigned_.begin());
    std::vector<PointId> rest;
    for (PointId id = anchor + 1; id < ds_.size(); ++id) {
      if (!assigned_[id]) rest.push_back(id);
    }
    assigned_[anchor] = true;
    std::vector<PointId> members{anchor};
    extend(rest, 0, members, acc);
    assigned_[anchor] = false;
  }

  void extend(const std::vector<PointId>& rest, std::size_t from,
              std::vector<PointId>& members, double acc) {
    if (members.size() >= 2 && is_star(members)) {
      PointId center = members.front();
      double cost = std::numeric_limits<double>::infinity();
      for (PointId c : members) {
        const double cand = fairlet_cost(ds_, members, c, objective_);
        if (cand < cost) {
          cost = cand;
          center = c;
        }
      }
      current_.push_back(make_fairlet(members, center));
      recurse(combine(acc, cost));
      current_.pop_back();
    }
    if (members.size() == max_size_) return;
    for (std::size_t i = from; i < rest.size(); ++i) {
      members.push_back(rest[i]);
      assigned_[rest[i]] = true;
      extend(rest, i + 1, members, acc);
      assigned_[rest[i]] = false;
      members.pop_back();
    }
  }

  const ColoredDataset& ds_;
  std::size_t max_size_;
  Objective objective_;
  std::vector<bool> assigned_;
  std::vector<Fairlet> current_;
  std::vector<Fairlet> best_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  bool found_ = false;
};

}  // namespace

DecompositionResult brute_force_optimal_decomposition(const ColoredDataset& ds,
                                                      std::int64_t t_prime,
                                                      Objective objective) {
  if (ds.size() > kMaxOraclePoints) {
    throw Error("brute-force decomposition is limited to " +
                std::to_string(kMaxOraclePoints) + " points");
  }
  require_t_prime_feasible(ds, t_prime);
  DecompositionSearch search(ds, t_prime, objective);
  if (!search.run()) throw InfeasibleError("no fairlet decomposition exists");
  auto fairlets = search.best();
  std::sort(fairlets.begin(), fairlets.end(), [](const Fairlet& a, const Fairlet& b) {
    return a.members.front() < b.members.front();
  });
  return {FairletDecomposition(ds, std::move(fairlets), 1, t_prime),
          search.best_cost()};
}

FairletDecomposition decompose(const ColoredDataset& ds, std::int64_t t_prime,
                               Objective objective) {
  require_t_prime_feasible(ds, t_prime);
  if (t_prime == 1) {
    return objective == Objective::kCenter ? decompose_11_center(ds)
                                           : decompose_11_median(ds);
  }
  return objective == Objective::kCenter ? decompose_1t_center(ds, t_prime)
                                         : decompose_1t_median(ds, t_prime);
}

}  // namespace fairlet
