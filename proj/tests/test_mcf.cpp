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

#include <random>

#include "fairlet/core.hpp"
#include "fairlet/mcf.hpp"
#include "oracles.hpp"

using namespace fairlet;
using namespace fairlet::mcf;

TEST_CASE("forced single edge") {
  FlowNetwork<std::int64_t> net(2);
  net.add_edge(0, 1, 1, 3);
  net.set_supply(0, 1);
  net.set_supply(1, -1);
  const auto sol = solve(net);
  REQUIRE(sol.feasible());
  CHECK(*sol.total_cost == 3);
  CHECK(sol.flow == std::vector<std::int64_t>{1});
  CHECK(validate(net, sol));

  FlowNetwork<std::int64_t> closed(2);
  closed.add_edge(0, 1, 0, 3);
  closed.set_supply(0, 1);
  closed.set_supply(1, -1);
  CHECK_FALSE(solve(closed).feasible());
  CHECK_FALSE(validate(closed, solve(closed)));
}

TEST_CASE("diamond routes through the cheap branch") {
  // s=0, a=1, b=2, t=3
  FlowNetwork<std::int64_t> net(4);
  net.add_edge(0, 1, 1, 1);
  net.add_edge(0, 2, 1, 5);
  net.add_edge(1, 3, 1, 0);
  net.add_edge(2, 3, 1, 0);
  net.set_supply(0, 1);
  net.set_supply(3, -1);
  const auto sol = solve(net);
  REQUIRE(sol.feasible());
  CHECK(*sol.total_cost == 1);
  CHECK(sol.flow == std::vector<std::int64_t>{1, 0, 1, 0});

  // Two units must use both branches.
  net.set_supply(0, 2);
  net.set_supply(3, -2);
  CHECK(*solve(net).total_cost == 6);
}

TEST_CASE("infinite edges are never used") {
  FlowNetwork<double> net(3);
  net.add_edge(0, 2, 1, std::nullopt);
  net.add_edge(0, 1, 1, 2.5);
  net.add_edge(1, 2, 1, 0.25);
  net.set_supply(0, 1);
  net.set_supply(2, -1);
  const auto sol = solve(net);
  REQUIRE(sol.feasible());
  CHECK(*sol.total_cost == doctest::Approx(2.75));
  CHECK(sol.flow[0] == 0);

  FlowNetwork<double> only_infinite(2);
  only_infinite.add_edge(0, 1, 5, std::nullopt);
  only_infinite.set_supply(0, 1);
  only_infinite.set_supply(1, -1);
  CHECK_FALSE(solve(only_infinite).feasible());
}

TEST_CASE("validate rejects broken flows") {
  FlowNetwork<std::int64_t> net(3);
  net.add_edge(0, 1, 2, 1);
  net.add_edge(1, 2, 2, 1);
  net.set_supply(0, 2);
  net.set_supply(2, -2);
  auto sol = solve(net);
  REQUIRE(validate(net, sol));
  CHECK(*sol.total_cost == 4);

  auto over = sol;
  over.flow[0] = 3;
  over.flow[1] = 3;
  over.total_cost = 6;
  CHECK_FALSE(validate(net, over));

  auto leak = sol;
  leak.flow[1] = 1;
  leak.total_cost = 3;
  CHECK_FALSE(validate(net, leak));

  auto wrong_cost = sol;
  wrong_cost.total_cost = 5;
  CHECK_FALSE(validate(net, wrong_cost));
}

TEST_CASE("malformed networks") {
  FlowNetwork<std::int64_t> net(2);
  CHECK_THROWS_AS(net.add_edge(0, 0, 1, 1), Error);
  CHECK_THROWS_AS(net.add_edge(0, 1, -1, 1), Error);
  CHECK_THROWS_AS(net.add_edge(0, 2, 1, 1), Error);
  CHECK_THROWS_AS(net.add_edge(0, 1, 1, -4), Error);
  net.add_edge(0, 1, 1, 1);
  net.set_supply(0, 1);
  CHECK_THROWS_AS(solve(net), Error);
}

TEST_CASE("solver matches enumeration on small unit networks") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const auto net = testing::random_unit_network(rng);
    const auto truth = testing::enumerate_unit_flows(net);
    const auto sol = solve(net);
    REQUIRE(sol.feasible() == truth.has_value());
    if (!truth) continue;
    ++feasible;
    CHECK(*sol.total_cost == *truth);
    CHECK(validate(net, sol));
    CHECK_FALSE(testing::residual_has_negative_cycle(net, sol.flow));
  }
  CHECK(feasible > 300);
}

TEST_CASE("larger random networks carry an optimality certificate") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 8 + rng() % 10;
    FlowNetwork<double> net(n);
    std::uniform_real_distribution<double> cost(0.0, 5.0);
    for (std::size_t e = 0; e < 4 * n; ++e) {
      const NodeId from = rng() % n;
      NodeId to = rng() % n;
      if (to == from) to = (to + 1) % n;
      net.add_edge(from, to, 1 + static_cast<std::int64_t>(rng() % 3), cost(rng));
    }
    std::vector<std::int64_t> supply(n, 0);
    for (int u = 0; u < 4; ++u) {
      ++supply[rng() % n];
      --supply[rng() % n];
    }
    for (NodeId v = 0; v < n; ++v) net.set_supply(v, supply[v]);
    const auto sol = solve(net);
    if (!sol.feasible()) continue;
    CHECK(validate(net, sol));
    CHECK_FALSE(testing::residual_has_negative_cycle(net, sol.flow));
  }
}
