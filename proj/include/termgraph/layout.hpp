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

// Deterministic force-directed layout in the ForceAtlas2 family.
//
// Forces on node i at position p_i with degree deg_i:
//   attraction  along every edge (i, j):  max(w_ij, weight_floor) * |p_j - p_i|
//               directed towards p_j
//   repulsion   from every other node j:
//               repulsion_scaling * (deg_i + 1)(deg_j + 1) / |p_i - p_j|
//               directed away from p_j
//   gravity     gravity * (deg_i + 1), directed towards the origin
//
// One step moves every node by step_gain * F_i, clipped to the node's speed
// limit. The limit grows while the node keeps moving in a consistent direction
// and halves whenever its force reverses, which damps oscillation around the
// equilibrium. All forces of a step are evaluated on the same snapshot and
// accumulated in a fixed order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "termgraph/backbone.hpp"
#include "termgraph/error.hpp"

namespace termgraph {

struct LayoutParams {
  std::uint64_t seed = 1;
  std::size_t max_iterations = 10000;
  double convergence_epsilon = 1e-3;
  double repulsion_scaling = 2.0;
  double gravity = 1.0;
  double weight_floor = 0.01;

  // Throws kUsage if a positivity constraint is violated.
  void Validate() const {
    const auto bad = [](const char* what) {
      throw Error(Errc::kUsage, std::string("layout parameter ") + what);
    };
    if (max_iterations == 0) bad("max_iterations must be positive");
    if (!(convergence_epsilon > 0)) bad("convergence_epsilon must be > 0");
    if (!(repulsion_scaling > 0)) bad("repulsion_scaling must be > 0");
    if (!(gravity >= 0) || !std::isfinite(gravity)) bad("gravity must be >= 0");
    if (!(weight_floor > 0)) bad("weight_floor must be > 0");
  }
};

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct LayoutPositions {
  std::vector<Point> coords;
  std::size_t iterations_used = 0;
  bool converged = false;
  double final_max_displacement = 0;
};

// SplitMix64; fixed output sequence on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [-1, 1).
  double NextSigned() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-52 - 1.0;
  }

  // Uniform in the unit disk, by rejection from the enclosing square.
  Point NextInDisk() {
    while (true) {
      const double x = NextSigned();
      const double y = NextSigned();
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

 private:
  std::uint64_t state_;
};

inline LayoutPositions InitPositions(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  LayoutPositions out;
  out.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.coords.push_back(rng.NextInDisk());
  return out;
}

// Mutable state carried between steps.
struct LayoutState {
  LayoutPositions positions;
  std::vector<Point> previous_force;
  std::vector<double> speed_limit;
  std::uint64_t step = 0;
};

namespace layout_internal {

inline constexpr double kStepGain = 0.1;
inline constexpr double kInitialSpeedLimit = 1.0;
inline constexpr double kMaxSpeedLimit = 10.0;
inline constexpr double kSpeedGrowth = 1.2;
inline constexpr double kSpeedBackoff = 0.5;
inline constexpr double kMinSpeedLimit = 1e-6;
// Gravity has constant magnitude outside this radius and fades linearly to
// zero inside it, so it stays continuous at the origin.
inline constexpr double kGravityCore = 1.0;
// Nodes closer than this are treated as coincident and jittered apart.
inline constexpr double kCoincident = 1e-9;
inline constexpr double kJitter = 1e-6;

inline std::vector<double> Degrees(const FilteredGraph& g) {
  std::vector<double> deg(g.node_count(), 0.0);
  for (const Edge& e : g.edges) {
    deg[e.u] += 1;
    deg[e.v] += 1;
  }
  return deg;
}

inline void SeparateCoincident(std::vector<Point>* coords, std::uint64_t seed,
                               std::uint64_t step) {
  auto& p = *coords;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double dx = p[i].x - p[j].x;
      const double dy = p[i].y - p[j].y;
      if (dx * dx + dy * dy >= kCoincident * kCoincident) continue;
      SplitMix64 rng(seed ^ (step * 0x100000001B3ull) ^ (j * 0x9E3779B1ull));
      const Point offset = rng.NextInDisk();
      p[j].x += kJitter * (offset.x == 0 && offset.y == 0 ? 1.0 : offset.x);
      p[j].y += kJitter * offset.y;
    }
  }
}

}  // namespace layout_internal

inline LayoutState MakeLayoutState(LayoutPositions positions) {
  LayoutState state;
  const std::size_t n = positions.coords.size();
  state.positions = std::move(positions);
  state.previous_force.assign(n, Point{});
  state.speed_limit.assign(n, layout_internal::kInitialSpeedLimit);
  return state;
}

// One synchronous iteration. Returns the largest node displacement.
inline double LayoutStep(const FilteredGraph& graph, LayoutState* state,
                         const LayoutParams& params) {
  using namespace layout_internal;
  auto& coords = state->positions.coords;
  const std::size_t n = coords.size();
  if (n != graph.node_count()) {
    throw Error(Errc::kUsage, "positions do not match the graph");
  }
  const std::vector<double> deg = Degrees(graph);

  SeparateCoincident(&coords, params.seed, state->step);

  std::vector<Point> force(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[i].x - coords[j].x;
      const double dy = coords[i].y - coords[j].y;
      const double d2 = dx * dx + dy * dy;
      const double f =
          params.repulsion_scaling * (deg[i] + 1) * (deg[j] + 1) / d2;
      force[i].x += f * dx;
      force[i].y += f * dy;
      force[j].x -= f * dx;
      force[j].y -= f * dy;
    }
  }
  for (const Edge& e : graph.edges) {
    const double w = std::max(e.weight, params.weight_floor);
    const double dx = coords[e.v].x - coords[e.u].x;
    const double dy = coords[e.v].y - coords[e.u].y;
    force[e.u].x += w * dx;
    force[e.u].y += w * dy;
    force[e.v].x -= w * dx;
    force[e.v].y -= w * dy;
  }
  if (params.gravity > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::hypot(coords[i].x, coords[i].y);
      const double g = params.gravity * (deg[i] + 1) / std::max(r, kGravityCore);
      force[i].x -= g * coords[i].x;
      force[i].y -= g * coords[i].y;
    }
  }

  double max_displacement = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double& limit = state->speed_limit[i];
    if (state->step > 0) {
      const Point& prev = state->previous_force[i];
      const double agreement = force[i].x * prev.x + force[i].y * prev.y;
      limit = agreement > 0 ? std::min(limit * kSpeedGrowth, kMaxSpeedLimit)
                            : std::max(limit * kSpeedBackoff, kMinSpeedLimit);
    }
    double mx = kStepGain * force[i].x;
    double my = kStepGain * force[i].y;
    const double length = std::hypot(mx, my);
    if (length > limit) {
      mx *= limit / length;
      my *= limit / length;
    }
    coords[i].x += mx;
    coords[i].y += my;
    if (!std::isfinite(coords[i].x) || !std::isfinite(coords[i].y)) {
      throw Error(Errc::kNumericalBlowup,
                  "node " + std::to_string(i) + " left the finite plane at step " +
                      std::to_string(state->step));
    }
    max_displacement = std::max(max_displacement, std::hypot(mx, my));
  }
  state->previous_force = std::move(force);
  ++state->step;
  state->positions.final_max_displacement = max_displacement;
  return max_displacement;
}

// Single step from fresh adaptive state.
inline std::pair<LayoutPositions, double> LayoutStep(
    const FilteredGraph& graph, const LayoutPositions& positions,
    const LayoutParams& params) {
  LayoutState state = MakeLayoutState(positions);
  const double displacement = LayoutStep(graph, &state, params);
  return {std::move(state.positions), displacement};
}

// Iterates until the largest displacement falls below convergence_epsilon or
// max_iterations steps have run.
inline LayoutPositions RunLayout(const FilteredGraph& graph,
                                 const LayoutParams& params,
                                 LayoutPositions initial) {
  params.Validate();
  LayoutState state = MakeLayoutState(std::move(initial));
  state.positions.converged = false;
  while (state.step < params.max_iterations) {
    const double displacement = LayoutStep(graph, &state, params);
    if (displacement < params.convergence_epsilon) {
      state.positions.converged = true;
      break;
    }
  }
  state.positions.iterations_used = state.step;
  return std::move(state.positions);
}

inline LayoutPositions RunLayout(const FilteredGraph& graph,
                                 const LayoutParams& params) {
  return RunLayout(graph, params,
                   InitPositions(graph.node_count(), params.seed));
}

}  // namespace termgraph
