// Copyright 2026 The termgraph Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "termgraph/backbone.hpp"

namespace termgraph {
namespace {

SimilarityMatrix FromWeights(const std::vector<double>& w, std::size_t n) {
  SimilarityMatrix m;
  for (std::size_t i = 0; i < n; ++i) m.terms.push_back("t" + std::to_string(i));
  m.values = w;
  return m;
}

SimilarityMatrix Random(std::mt19937_64& rng, std::size_t n) {
  return FromWeights(testing::RandomSymmetric(rng, n, -1, 1), n);
}

double TreeWeight(const FilteredGraph& g) {
  double total = 0;
  for (const Edge& e : g.edges) {
    if (e.in_mst) total += e.weight;
  }
  return total;
}

// Nodes reachable from 0 using the given edges.
std::size_t Reachable(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack = {0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count;
}

// Minimum weight on the tree path between a and b.
double PathMin(std::size_t n, const std::vector<Edge>& tree, std::size_t a,
               std::size_t b) {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const Edge& e : tree) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  std::vector<double> best(n, std::nan(""));
  std::vector<std::size_t> stack = {a};
  best[a] = INFINITY;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (const auto& [y, w] : adj[x]) {
      if (!std::isnan(best[y])) continue;
      best[y] = std::min(best[x], w);
      stack.push_back(y);
    }
  }
  return best[b];
}

TEST(PruferOracle, VisitsEveryLabelledTreeOnce) {
  for (std::size_t n = 3; n <= 6; ++n) {
    std::set<std::vector<std::pair<std::size_t, std::size_t>>> trees;
    std::vector<std::size_t> seq(n - 2, 0);
    while (true) {
      auto edges = testing::PruferToTree(seq, n);
      std::sort(edges.begin(), edges.end());
      ASSERT_EQ(edges.size(), n - 1);
      std::vector<Edge> as_edges;
      for (const auto& [u, v] : edges) as_edges.push_back({u, v, 0, false});
      ASSERT_EQ(Reachable(n, as_edges), n);
      trees.insert(edges);
      std::size_t k = 0;
      while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
      if (k == seq.size()) break;
    }
    EXPECT_EQ(trees.size(), testing::CayleyCount(n));
  }
}

TEST(MaxSpanningTree, TwoNodes) {
  const FilteredGraph g = FilterBackbone(FromWeights({1, 0.3, 0.3, 1}, 2));
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1, 0.3, true}));
}

TEST(MaxSpanningTree, ThreeNodeHandExample) {
  const auto m = FromWeights({1, 0.9, 0.5, 0.9, 1, 0.8, 0.5, 0.8, 1}, 3);
  const auto tree = MaxSpanningTree(m);
  std::set<std::pair<std::size_t, std::size_t>> set;
  double total = 0;
  for (const Edge& e : tree) {
    set.emplace(e.u, e.v);
    total += e.weight;
  }
  EXPECT_EQ(set, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
  EXPECT_DOUBLE_EQ(total, 1.7);
  EXPECT_DOUBLE_EQ(total, testing::BruteForceMaxSpanningTreeWeight(m.values, 3));
}

TEST(MaxSpanningTree, SevenNodesAgainstAllCayleyTrees) {
  EXPECT_EQ(testing::CayleyCount(7), 16807u);
  std::mt19937_64 rng(70);
  for (int iter = 0; iter < 5; ++iter) {
    const auto m = Random(rng, 7);
    double total = 0;
    for (const Edge& e : MaxSpanningTree(m)) total += e.weight;
    EXPECT_NEAR(total, testing::BruteForceMaxSpanningTreeWeight(m.values, 7),
                1e-12);
  }
}

TEST(MaxSpanningTree, TiesBreakByEndpoints) {
  // All weights equal: the tree is the star around node 0.
  std::vector<double> w(16, 0.5);
  const auto tree = MaxSpanningTree(FromWeights(w, 4));
  ASSERT_EQ(tree.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(tree[k].u, 0u);
    EXPECT_EQ(tree[k].v, k + 1);
  }
}

TEST(SuperposeEdges, BudgetExamples) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(FilterBackbone(Random(rng, 4)).edges.size(), 6u);
  EXPECT_EQ(EdgeBudget(4), 8u);
  const FilteredGraph big = FilterBackbone(Random(rng, 73));
  EXPECT_EQ(big.edges.size(), 146u);
  EXPECT_EQ(std::count_if(big.edges.begin(), big.edges.end(),
                          [](const Edge& e) { return e.in_mst; }),
            72);
  EXPECT_EQ(EdgeBudget(5, 1.5), 8u);
  EXPECT_EQ(FilterBackbone(Random(rng, 10), 1.25).edges.size(), 13u);
}

TEST(SuperposeEdges, BudgetTooSmallAndBadMultiplier) {
  std::mt19937_64 rng(2);
  const auto m = Random(rng, 10);
  try {
    SuperposeEdges(m, MaxSpanningTree(m), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBudgetTooSmall);
  }
  try {
    FilterBackbone(m, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBudgetTooSmall);
  }
  for (double bad : {0.0, -1.0, std::nan("")}) {
    try {
      EdgeBudget(10, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kUsage);
    }
  }
}

TEST(SuperposeEdges, FiveNodeFixtureMatchesSortOracle) {
  // Distinct weights chosen by hand.
  const std::vector<double> w = {
      1,    0.90, 0.10, 0.40, 0.35,  //
      0.90, 1,    0.85, 0.20, 0.30,  //
      0.10, 0.85, 1,    0.80, 0.25,  //
      0.40, 0.20, 0.80, 1,    0.75,  //
      0.35, 0.30, 0.25, 0.75, 1};
  const FilteredGraph g = FilterBackbone(FromWeights(w, 5));
  std::set<std::pair<std::size_t, std::size_t>> tree, extra;
  for (const Edge& e : g.edges) (e.in_mst ? tree : extra).emplace(e.u, e.v);
  EXPECT_EQ(tree, (std::set<std::pair<std::size_t, std::size_t>>{
                      {0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  // Non-tree edges by weight: (0,3)=0.40, (0,4)=0.35, (1,4)=0.30,
  // (2,4)=0.25, ... ; budget 10 leaves room for all 6.
  EXPECT_EQ(g.edges.size(), 10u);
  const FilteredGraph g2 = FilterBackbone(FromWeights(w, 5), 1.4);
  extra.clear();
  for (const Edge& e : g2.edges) {
    if (!e.in_mst) extra.emplace(e.u, e.v);
  }
  EXPECT_EQ(extra, (std::set<std::pair<std::size_t, std::size_t>>{
                       {0, 3}, {0, 4}, {1, 4}}));
}

TEST(FilterBackboneProperty, RandomInstances) {
  std::mt19937_64 rng(2026);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 2 + iter % 9;
    auto w = testing::RandomSymmetric(rng, n, -1, 1);
    // Some instances get coarse weights so ties actually occur.
    if (iter % 3 == 0) {
      for (auto& x : w) x = std::round(x * 4) / 4;
      for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1;
    }
    const auto m = FromWeights(w, n);
    const FilteredGraph g = FilterBackbone(m);
    const std::size_t pairs = n * (n - 1) / 2;
    ASSERT_EQ(g.edges.size(), std::min(2 * n, pairs));
    std::vector<Edge> tree, rest;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : g.edges) {
      ASSERT_LT(e.u, e.v);
      ASSERT_EQ(e.weight, m.at(e.u, e.v));
      ASSERT_TRUE(seen.emplace(e.u, e.v).second);
      (e.in_mst ? tree : rest).push_back(e);
    }
    ASSERT_TRUE(std::is_sorted(g.edges.begin(), g.edges.end(), ByEndpoints));
    ASSERT_EQ(tree.size(), n - 1);
    ASSERT_EQ(Reachable(n, tree), n);
    ASSERT_EQ(Reachable(n, g.edges), n);
    if (n <= 8) {
      ASSERT_NEAR(TreeWeight(g), testing::BruteForceMaxSpanningTreeWeight(w, n),
                  1e-12);
    }
    // Cut property, and every chosen non-tree edge ranks ahead of every
    // excluded one.
    std::vector<Edge> excluded;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (!seen.contains({u, v})) excluded.push_back({u, v, m.at(u, v), false});
      }
    }
    for (const Edge& e : rest) {
      ASSERT_LE(e.weight, PathMin(n, tree, e.u, e.v) + 1e-12);
      for (const Edge& x : excluded) ASSERT_TRUE(RanksBefore(e, x));
    }
    for (const Edge& x : excluded) {
      ASSERT_LE(x.weight, PathMin(n, tree, x.u, x.v) + 1e-12);
    }
  }
}

}  // namespace
}  // namespace termgraph
