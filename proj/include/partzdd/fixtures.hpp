#pragma once

// Synthetic inputs for tests, demos and desk-scale studies.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdint>

#include "partzdd/graph.hpp"
#include "partzdd/io.hpp"
#include "partzdd/random.hpp"

namespace partzdd {

// The six-vertex, seven-edge running example used throughout the tests.
inline Graph example_graph() {
  return build_graph(6, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 6}, {5, 6}});
}

// Attributes for a rows x cols grid: unit-spaced coordinates, populations
// uniform in [500, 1500], and a partisan share that drifts smoothly across
// the grid plus independent noise, clamped to [0.02, 0.98].
inline VertexAttributes grid_attributes(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  VertexAttributes a;
  a.rep_share.emplace();
  a.x.emplace();
  a.y.emplace();
  const double phase = 2 * std::numbers::pi * rng.uniform();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      a.population.push_back(500 + rng.below(1001));
      const double trend = 0.5 + 0.25 * std::sin(phase + 0.7 * static_cast<double>(r) + 0.4 * static_cast<double>(c));
      const double share = trend + 0.3 * (rng.uniform() - 0.5);
      a.rep_share->push_back(std::clamp(share, 0.02, 0.98));
      a.x->push_back(static_cast<double>(c));
      a.y->push_back(static_cast<double>(r));
    }
  }
  return a;
}

}  // namespace partzdd
