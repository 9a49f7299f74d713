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

// Backbone extraction from a complete similarity graph: the maximum spanning
// tree, with the next-strongest remaining edges superposed on it until an
// edge budget (by default 2N) is met.
//
// Edges are ranked by (weight descending, u ascending, v ascending). Every
// selection below follows that single order, so results are deterministic
// under ties and depend only on the ranking of the weights.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "termgraph/error.hpp"
#include "termgraph/similarity_matrix.hpp"

namespace termgraph {

// An undirected edge with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0;
  bool in_mst = false;
  bool operator==(const Edge&) const = default;
};

struct FilteredGraph {
  std::vector<std::string> terms;
  std::vector<Edge> edges;  // sorted by (u, v)
  std::size_t edge_budget = 0;

  std::size_t node_count() const { return terms.size(); }
  bool operator==(const FilteredGraph&) const = default;
};

// Strict weak order implementing the documented tie-break.
inline bool RanksBefore(const Edge& a, const Edge& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

inline bool ByEndpoints(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

// All N(N-1)/2 off-diagonal pairs, in ranking order.
inline std::vector<Edge> RankedEdges(const SimilarityMatrix& m) {
  std::vector<Edge> edges;
  const std::size_t n = m.size();
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      edges.push_back({u, v, m.at(u, v), false});
    }
  }
  std::sort(edges.begin(), edges.end(), RanksBefore);
  return edges;
}

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if a and b were already connected.
  bool Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Kruskal on the ranked edge list. Returns N-1 edges flagged in_mst, in the
// order they were accepted.
inline std::vector<Edge> MaxSpanningTree(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  if (n < 2) {
    throw Error(Errc::kTooFewTerms,
                "need at least 2 nodes, got " + std::to_string(n));
  }
  UnionFind components(n);
  std::vector<Edge> tree;
  tree.reserve(n - 1);
  for (Edge e : RankedEdges(m)) {
    if (!components.Union(e.u, e.v)) continue;
    e.in_mst = true;
    tree.push_back(e);
    if (tree.size() == n - 1) break;
  }
  return tree;
}

// ceil(multiplier * N). The edge count actually emitted is additionally capped
// at N(N-1)/2.
inline std::size_t EdgeBudget(std::size_t n, double multiplier = 2.0) {
  if (!(multiplier > 0) || !std::isfinite(multiplier)) {
    throw Error(Errc::kUsage, "edge multiplier must be positive");
  }
  return static_cast<std::size_t>(
      std::ceil(multiplier * static_cast<double>(n)));
}

// Keeps the tree and adds the top-ranked non-tree edges until the graph holds
// min(edge_budget, N(N-1)/2) edges.
inline FilteredGraph SuperposeEdges(const SimilarityMatrix& m,
                                    const std::vector<Edge>& mst,
                                    std::size_t edge_budget) {
  const std::size_t n = m.size();
  if (edge_budget < n - 1) {
    throw Error(Errc::kBudgetTooSmall,
                "budget " + std::to_string(edge_budget) +
                    " cannot hold a spanning tree of " + std::to_string(n) +
                    " nodes");
  }
  const std::size_t total = std::min(edge_budget, n * (n - 1) / 2);

  std::vector<bool> in_tree(n * n, false);
  for (const Edge& e : mst) in_tree[e.u * n + e.v] = true;

  FilteredGraph g;
  g.terms = m.terms;
  g.edge_budget = edge_budget;
  g.edges = mst;
  for (const Edge& e : RankedEdges(m)) {
    if (g.edges.size() >= total) break;
    if (!in_tree[e.u * n + e.v]) g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end(), ByEndpoints);
  return g;
}

// Maximum spanning tree plus superposition with budget ceil(multiplier * N).
inline FilteredGraph FilterBackbone(const SimilarityMatrix& m,
                                    double multiplier = 2.0) {
  const std::size_t budget = EdgeBudget(m.size(), multiplier);
  return SuperposeEdges(m, MaxSpanningTree(m), budget);
}

}  // namespace termgraph
