#pragma once

#include <random>
#include <set>
#include <vector>

#include "oracle.hpp"
#include "partzdd/graph.hpp"

namespace testing_util {

inline partzdd::Graph to_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<partzdd::Edge> e;
  for (auto [u, v] : edges) e.push_back({static_cast<partzdd::Vertex>(u), static_cast<partzdd::Vertex>(v)});
  return partzdd::Graph(n, e);
}

// Random connected graph: a random spanning tree plus extra random edges.
inline std::vector<std::pair<int, int>> random_connected_edges(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> e;
  std::set<std::pair<int, int>> seen;
  for (std::size_t v = 1; v < n; ++v) {
    int u = static_cast<int>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
    e.emplace_back(u, static_cast<int>(v));
    seen.emplace(u, static_cast<int>(v));
  }
  for (std::size_t tries = 0; tries < 20 * extra && seen.size() < n - 1 + extra; ++tries) {
    int a = static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    int b = static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.emplace(a, b).second) e.emplace_back(a, b);
  }
  std::shuffle(e.begin(), e.end(), rng);
  return e;
}

inline std::vector<oracle::Labels> labels_of(const std::vector<partzdd::Partition>& plans) {
  std::vector<oracle::Labels> out;
  for (const auto& p : plans) out.push_back(p.labels());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing_util
