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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fairlet/clustering.hpp"
#include "fairlet/fairlets.hpp"
#include "oracles.hpp"

using namespace fairlet;
using fairlet::testing::line;

namespace {

constexpr Color R = Color::kRed;
constexpr Color B = Color::kBlue;

// b at 0, r1 at 1, r2 at 3: d(b, r1) = 1, d(b, r2) = 3.
ColoredDataset one_blue_two_red() { return line({0, 1, 3}, {B, R, R}); }

void check_fairlet_bounds(const ColoredDataset& ds, const FairletDecomposition& dec) {
  const Rational target(dec.b(), dec.r());
  std::size_t covered = 0;
  for (const Fairlet& f : dec.fairlets()) {
    CHECK(static_cast<std::int64_t>(f.members.size()) <= dec.b() + dec.r());
    CHECK(balance_of_subset(ds, f.members) >= target);
    covered += f.members.size();
  }
  CHECK(covered == ds.size());
}

ColoredDataset random_feasible(std::mt19937_64& rng, std::int64_t t_prime,
                               std::size_t max_n) {
  while (true) {
    const std::size_t n = 2 + rng() % (max_n - 1);
    const std::size_t blue = 1 + rng() % (n - 1);
    const std::size_t red = n - blue;
    if (balance_of_counts(red, blue) >= Rational(1, t_prime)) {
      return testing::random_plane(rng, blue, red);
    }
  }
}

}  // namespace

TEST_CASE("decomposition cost") {
  const auto ds = line({0, 1, 2, 10}, {R, B, R, B});
  const FairletDecomposition dec(ds, {{{0, 1}, 0}, {{2, 3}, 2}}, 1, 1);
  CHECK(decomposition_cost(ds, dec, Objective::kMedian) == 9.0);
  CHECK(decomposition_cost(ds, dec, Objective::kCenter) == 8.0);
  CHECK(dec.beta(3) == 1);

  const auto three = line({0, 1, 3}, {R, B, R});
  const FairletDecomposition single(three, {{{0, 1, 2}, 1}}, 1, 2);
  CHECK(decomposition_cost(three, single, Objective::kMedian) == 3.0);
  CHECK(decomposition_cost(three, single, Objective::kCenter) == 2.0);

  const std::vector<Fairlet> selfish{{{0}, 0}, {{1}, 1}};
  CHECK(decomposition_cost(ds, selfish, Objective::kMedian) == 0.0);
  CHECK(decomposition_cost(ds, selfish, Objective::kCenter) == 0.0);
}

TEST_CASE("decomposition validation") {
  const auto ds = line({0, 1, 2, 10}, {R, B, R, B});
  CHECK_THROWS_AS(FairletDecomposition(ds, {{{0, 1}, 2}, {{2, 3}, 2}}, 1, 1), Error);
  CHECK_THROWS_AS(FairletDecomposition(ds, {{{0, 2}, 0}, {{1, 3}, 1}}, 1, 1), Error);
  CHECK_THROWS_AS(FairletDecomposition(ds, {{{0, 1}, 0}}, 1, 1), Error);
  CHECK_THROWS_AS(FairletDecomposition(ds, {{{0, 1, 2, 3}, 0}}, 1, 2), Error);
  CHECK_THROWS_AS(FairletDecomposition(ds, {{{0, 1}, 0}, {{1, 2, 3}, 2}}, 1, 2), Error);
}

TEST_CASE("(1,1) decompositions") {
  // blue {1, 10}, red {0, 2}
  const auto ds = line({1, 10, 0, 2}, {B, B, R, R});
  const auto center = decompose_11_center(ds);
  CHECK(decomposition_cost(ds, center, Objective::kCenter) == 8.0);
  const auto median = decompose_11_median(ds);
  CHECK(decomposition_cost(ds, median, Objective::kMedian) == 9.0);
  for (const Fairlet& f : median.fairlets()) CHECK(f.center == f.members.front());

  const auto pair = line({0, 5}, {B, R});
  CHECK(decomposition_cost(pair, decompose_11_center(pair), Objective::kCenter) == 5.0);
  CHECK(decomposition_cost(pair, decompose_11_median(pair), Objective::kMedian) == 5.0);

  const auto coincident = line({4, 4, 9, 9}, {B, R, R, B});
  CHECK(decomposition_cost(coincident, decompose_11_center(coincident),
                           Objective::kCenter) == 0.0);
  CHECK(decomposition_cost(coincident, decompose_11_median(coincident),
                           Objective::kMedian) == 0.0);

  CHECK_THROWS_AS(decompose_11_center(line({0, 1, 2}, {B, R, R})), InfeasibleError);
  CHECK_THROWS_AS(decompose_11_median(line({0, 1}, {R, R})), InfeasibleError);
}

TEST_CASE("fairlet flow network layout") {
  const auto ds = one_blue_two_red();
  const auto fn = build_median_network(ds, 2);
  CHECK(fn.net.node_count() == 11);
  CHECK(fn.net.edge(0).from == fn.kSource);
  CHECK(fn.net.edge(0).to == fn.kSink);
  CHECK(fn.net.edge(0).capacity == 1);
  CHECK(fn.net.supply(fn.kSource) == 2);
  CHECK(fn.net.supply(fn.kSink) == -1);
  CHECK(fn.net.supply(fn.blue_node(0)) == 1);
  CHECK(fn.net.supply(fn.red_node(0)) == -1);
  CHECK(fn.net.supply(fn.red_node(1)) == -1);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(fn.net.supply(fn.red_copy(i, j)) == 0);
  }
  // 1 + 1 + 2 + (2 + 4) + 1 * 2 * 4
  CHECK(fn.net.edges().size() == 18);
  CHECK(fn.copy_edges.size() == 8);

  const auto pair = line({0, 2}, {B, R});
  const auto small = build_center_network(pair, 2, 5.0);
  CHECK(small.net.edges().size() == 11);
  CHECK(small.net.node_count() == 8);

  const auto blocked = build_center_network(ds, 2, 0.5);
  for (const auto& ce : blocked.copy_edges) CHECK(blocked.net.edge(ce.edge).infinite());
  const auto open = build_center_network(ds, 2, 1.0);
  std::size_t finite = 0;
  for (const auto& ce : open.copy_edges) finite += open.net.edge(ce.edge).infinite() ? 0 : 1;
  CHECK(finite == 4);

  CHECK_THROWS_AS(build_median_network(ds, 1), Error);
  CHECK_THROWS_AS(build_median_network(line({0, 1}, {R, R}), 2), Error);
}

TEST_CASE("copy-edge capacities and directions") {
  const auto ds = line({0, 1, 5, 6}, {B, R, B, R});
  const std::int64_t t = 3;
  const auto fn = build_center_network(ds, t, 100.0);
  for (const auto& e : fn.net.edges()) {
    if (e.from == fn.kSource && e.to == fn.kSink) {
      CHECK(e.capacity == 2);
    } else if (e.from == fn.kSource || e.to == fn.kSink) {
      CHECK(e.capacity == t - 1);
      CHECK(*e.cost == 0);
    } else {
      CHECK(e.capacity == 1);
    }
  }
  for (const auto& ce : fn.copy_edges) CHECK(*fn.net.edge(ce.edge).cost == 1);
}

TEST_CASE("star extraction") {
  const auto ds = one_blue_two_red();
  const auto fn = build_median_network(ds, 2);
  const auto sol = mcf::solve(fn.net);
  REQUIRE(sol.feasible());
  CHECK(*sol.total_cost == doctest::Approx(4.0));
  const auto dec = extract_stars(ds, fn, sol);
  REQUIRE(dec.size() == 1);
  CHECK(dec.fairlets()[0].members == std::vector<PointId>{0, 1, 2});
  CHECK(dec.fairlets()[0].center == 0);
  CHECK(decomposition_cost(ds, dec, Objective::kMedian) == 4.0);

  // Two far apart pairs: a perfect matching, size-2 stars centered at the
  // lower id.
  const auto pairs = line({0, 1, 50, 51}, {R, B, B, R});
  const auto pn = build_median_network(pairs, 2);
  const auto pdec = extract_stars(pairs, pn, mcf::solve(pn.net));
  REQUIRE(pdec.size() == 2);
  CHECK(pdec.fairlets()[0].members == std::vector<PointId>{0, 1});
  CHECK(pdec.fairlets()[0].center == 0);
  CHECK(pdec.fairlets()[1].members == std::vector<PointId>{2, 3});
  CHECK(pdec.fairlets()[1].center == 2);

  mcf::FlowSolution<double> infeasible;
  infeasible.flow.assign(pn.net.edges().size(), 0);
  CHECK_THROWS_AS(extract_stars(pairs, pn, infeasible), Error);
}

TEST_CASE("star extraction rejects a flow that leaves a point uncovered") {
  const auto pairs = line({0, 1, 50, 51}, {R, B, B, R});
  const auto fn = build_median_network(pairs, 2);
  auto sol = mcf::solve(fn.net);
  REQUIRE(sol.feasible());
  for (const auto& ce : fn.copy_edges) {
    if (fn.blue_ids[ce.blue] == 2) sol.flow[ce.edge] = 0;
  }
  CHECK_THROWS_AS(extract_stars(pairs, fn, sol), Error);
}

TEST_CASE("(1,t') k-center decomposition") {
  const auto zero = line({0, 0, 7, 7}, {B, R, R, B});
  CHECK(center_threshold(zero, 2) == 0.0);
  CHECK(decomposition_cost(zero, decompose_1t_center(zero, 2), Objective::kCenter) == 0.0);

  const auto ds = one_blue_two_red();
  CHECK(center_threshold(ds, 2) == 3.0);
  const auto dec = decompose_1t_center(ds, 2);
  REQUIRE(dec.size() == 1);
  CHECK(dec.fairlets()[0].members == std::vector<PointId>{0, 1, 2});
  CHECK(decomposition_cost(ds, dec, Objective::kCenter) == 3.0);

  CHECK_THROWS_AS(decompose_1t_center(line({0, 1, 2, 3}, {B, R, R, R}), 2),
                  InfeasibleError);
  CHECK_NOTHROW(decompose_1t_center(line({0, 1, 2, 3}, {B, R, R, R}), 3));
}

TEST_CASE("(1,t') k-median decomposition") {
  const auto ds = one_blue_two_red();
  CHECK(decomposition_cost(ds, decompose_1t_median(ds, 2), Objective::kMedian) == 4.0);

  const auto coincident = line({3, 3, 3, 8, 8}, {B, R, R, B, R});
  const auto dec = decompose_1t_median(coincident, 2);
  CHECK(decomposition_cost(coincident, dec, Objective::kMedian) == 0.0);
  check_fairlet_bounds(coincident, dec);

  // Well separated bichromatic pairs: the optimum is the min-cost matching.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> xs;
    std::vector<Color> colors;
    const std::size_t pairs = 1 + rng() % 4;
    for (std::size_t p = 0; p < pairs; ++p) {
      const double base = 100.0 * static_cast<double>(p);
      const double gap = 1.0 + static_cast<double>(rng() % 5);
      xs.insert(xs.end(), {base, base + gap});
      colors.insert(colors.end(), rng() % 2 ? std::initializer_list<Color>{R, B}
                                            : std::initializer_list<Color>{B, R});
    }
    const auto sep = line(xs, colors);
    CHECK(decomposition_cost(sep, decompose_1t_median(sep, 2), Objective::kMedian) ==
          doctest::Approx(decomposition_cost(sep, decompose_11_median(sep),
                                             Objective::kMedian)));
  }
}

TEST_CASE("balanced partition") {
  const auto six = line({0, 1, 2, 3, 4, 5}, {R, R, B, R, R, B});
  const auto dec = balanced_partition(six, 1, 2);
  REQUIRE(dec.size() == 2);
  for (const Fairlet& f : dec.fairlets()) {
    CHECK(f.members.size() == 3);
    CHECK(balance_of_subset(six, f.members) == Rational(1, 2));
  }

  const auto even = line({0, 1, 2, 3, 4, 5}, {R, B, R, B, R, B});
  const auto pairs = balanced_partition(even, 1, 1);
  CHECK(pairs.size() == 3);
  for (const Fairlet& f : pairs.fairlets()) CHECK(f.members.size() == 2);

  const auto five = line({0, 1, 2, 3, 4, 5}, {R, R, R, B, R, R});
  const auto whole = balanced_partition(five, 1, 5);
  REQUIRE(whole.size() == 1);
  CHECK(whole.fairlets()[0].members.size() == 6);

  CHECK_THROWS_AS(balanced_partition(six, 1, 3), InfeasibleError);
  CHECK_THROWS_AS(balanced_partition(six, 2, 4), Error);
  CHECK_THROWS_AS(balanced_partition(six, 2, 1), Error);
}

TEST_CASE("balanced partition on random color profiles") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 6);
    std::int64_t b = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r));
    while (std::gcd(b, r) != 1) --b;
    const std::int64_t scale = 1 + static_cast<std::int64_t>(rng() % 5);
    const auto ds = testing::random_plane(rng, static_cast<std::size_t>(b * scale),
                                          static_cast<std::size_t>(r * scale));
    const auto dec = balanced_partition(ds, b, r);
    check_fairlet_bounds(ds, dec);
  }
}

TEST_CASE("brute-force decomposition oracle") {
  const auto ds = one_blue_two_red();
  // The best center of {b, r1, r2} is r1, not the hub b.
  CHECK(brute_force_optimal_decomposition(ds, 2, Objective::kMedian).cost == 3.0);
  CHECK(brute_force_optimal_decomposition(ds, 2, Objective::kCenter).cost == 2.0);
  const auto pair = line({0, 6}, {R, B});
  CHECK(brute_force_optimal_decomposition(pair, 1, Objective::kMedian).cost == 6.0);
  CHECK_THROWS_AS(brute_force_optimal_decomposition(ds, 1, Objective::kMedian),
                  InfeasibleError);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(brute_force_optimal_decomposition(testing::random_plane(rng, 6, 6), 1,
                                                    Objective::kMedian),
                  Error);
}

TEST_CASE("(1,1) decompositions are optimal") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t half = 1 + rng() % 4;
    const auto ds = testing::random_plane(rng, half, half);
    const double center = decomposition_cost(ds, decompose_11_center(ds), Objective::kCenter);
    const double median = decomposition_cost(ds, decompose_11_median(ds), Objective::kMedian);
    CHECK(center == doctest::Approx(
                        brute_force_optimal_decomposition(ds, 1, Objective::kCenter).cost)
                        .epsilon(1e-12));
    CHECK(median == doctest::Approx(
                        brute_force_optimal_decomposition(ds, 1, Objective::kMedian).cost)
                        .epsilon(1e-12));
  }
}

TEST_CASE("(1,t') decompositions: guarantees and structure") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t t = 2 + static_cast<std::int64_t>(rng() % 2);
    const auto ds = random_feasible(rng, t, 8);

    const auto center = decompose_1t_center(ds, t);
    const auto median = decompose_1t_median(ds, t);
    check_fairlet_bounds(ds, center);
    check_fairlet_bounds(ds, median);

    const auto opt_center = brute_force_optimal_decomposition(ds, t, Objective::kCenter);
    const auto opt_median = brute_force_optimal_decomposition(ds, t, Objective::kMedian);
    const double tau = center_threshold(ds, t);
    CHECK(decomposition_cost(ds, center, Objective::kCenter) <= tau + 1e-12);
    CHECK(tau <= 2.0 * opt_center.cost + 1e-9);
    CHECK(decomposition_cost(ds, median, Objective::kMedian) >= opt_median.cost - 1e-9);

    // The optimal decomposition becomes a feasible flow once tau covers
    // every leaf-to-hub distance, which is at most twice its cost.
    const auto fn = build_center_network(ds, t, 2.0 * opt_center.cost + 1e-12);
    CHECK(mcf::solve(fn.net).feasible());
  }
}

TEST_CASE("median flow cost equals the extracted star cost") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t t = 2 + static_cast<std::int64_t>(rng() % 3);
    const auto ds = random_feasible(rng, t, 12);
    const auto fn = build_median_network(ds, t);
    const auto sol = mcf::solve(fn.net);
    REQUIRE(sol.feasible());
    CHECK(mcf::validate(fn.net, sol));
    const auto dec = extract_stars(ds, fn, sol);
    CHECK(decomposition_cost(ds, dec, Objective::kMedian) <= *sol.total_cost + 1e-9);
  }
}

TEST_CASE("fairlet cost against the fair clustering optimum") {
  // Four points around a red center at the origin. The single balanced
  // cluster has radius 1, yet every (1,1) decomposition pairs a blue point
  // with the red point at (0,1), costing sqrt(2).
  const auto ds = ColoredDataset::euclidean({R, B, B, R},
                                            {{0, 0}, {1, 0}, {-1, 0}, {0, 1}});
  const double fairlet = decomposition_cost(ds, decompose_11_center(ds), Objective::kCenter);
  const auto opt = brute_force_fair_clustering(ds, 1, Rational(1), Objective::kCenter);
  CHECK(opt.cost == 1.0);
  CHECK(fairlet == doctest::Approx(std::sqrt(2.0)));

  // Any balanced cluster of radius rho pairs up within 2 rho, so twice the
  // fair optimum always bounds the fairlet cost.
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 150; ++trial) {
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 3);
    const auto sample = t == 1 ? testing::random_plane(rng, 3, 3) : random_feasible(rng, t, 8);
    const double cost = decomposition_cost(sample, decompose(sample, t, Objective::kCenter),
                                           Objective::kCenter);
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, sample.size()); ++k) {
      try {
        const auto best =
            brute_force_fair_clustering(sample, k, Rational(1, t), Objective::kCenter);
        CHECK(cost <= 2.0 * best.cost + 1e-9);
      } catch (const InfeasibleError&) {
      }
    }
  }
}
