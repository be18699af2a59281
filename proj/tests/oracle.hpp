#pragma once

// Independent exhaustive oracles. Nothing here calls into the diagram code:
// partitions come from restricted-growth strings and connectivity from a
// plain BFS over an adjacency matrix.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

namespace oracle {

using Labels = std::vector<std::uint32_t>;  // canonical, 1-based

inline std::vector<std::vector<char>> adjacency(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1;
  return a;
}

inline bool block_connected(const std::vector<std::vector<char>>& adj, const Labels& lab, std::uint32_t d) {
  const std::size_t n = lab.size();
  std::size_t start = n, size = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (lab[v] == d) {
      ++size;
      if (start == n) start = v;
    }
  }
  if (size == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  q.push(start);
  seen[start] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    ++reached;
    for (std::size_t y = 0; y < n; ++y) {
      if (adj[x][y] && !seen[y] && lab[y] == d) {
        seen[y] = 1;
        q.push(y);
      }
    }
  }
  return reached == size;
}

// Every partition of n vertices into exactly p connected blocks, as
// canonical label vectors in lexicographic order.
inline std::vector<Labels> connected_partitions(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                                                std::size_t p) {
  const auto adj = adjacency(n, edges);
  std::vector<Labels> out;
  Labels lab(n, 0);
  // Restricted growth: lab[0] = 1, lab[i] <= max(lab[0..i-1]) + 1, capped at p.
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t maxlab) -> void {
    if (n - i < p - maxlab) return;  // not enough vertices left to open new blocks
    if (i == n) {
      if (maxlab != p) return;
      for (std::uint32_t d = 1; d <= p; ++d) {
        if (!block_connected(adj, lab, d)) return;
      }
      out.push_back(lab);
      return;
    }
    for (std::uint32_t d = 1; d <= std::min<std::uint32_t>(maxlab + 1, static_cast<std::uint32_t>(p)); ++d) {
      lab[i] = d;
      self(self, i + 1, std::max(maxlab, d));
    }
  };
  if (n == 0 || p == 0 || p > n) return out;
  lab[0] = 1;
  rec(rec, 1, 1);
  return out;
}

inline std::vector<std::pair<int, int>> grid_edges(int rows, int cols) {
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int v = r * cols + c;
      if (c + 1 < cols) e.emplace_back(v, v + 1);
      if (r + 1 < rows) e.emplace_back(v, v + cols);
    }
  }
  return e;
}

// Running example (0-based): 1-2, 1-3, 2-3, 2-4, 3-5, 4-6, 5-6.
inline std::vector<std::pair<int, int>> example_edges() {
  return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}};
}

// BFS hop distances; -1 for unreachable.
inline std::vector<int> bfs_distances(std::size_t n, const std::vector<std::pair<int, int>>& edges, int s) {
  const auto adj = adjacency(n, edges);
  std::vector<int> d(n, -1);
  std::queue<int> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (std::size_t y = 0; y < n; ++y) {
      if (adj[x][y] && d[y] < 0) {
        d[y] = d[x] + 1;
        q.push(static_cast<int>(y));
      }
    }
  }
  return d;
}

// True when removing `cut` disconnects s from t.
inline bool separates(std::size_t n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& cut, int s,
                      int t) {
  std::vector<std::pair<int, int>> kept;
  for (auto [u, v] : edges) {
    if (std::find(cut.begin(), cut.end(), u) == cut.end() && std::find(cut.begin(), cut.end(), v) == cut.end()) {
      kept.emplace_back(u, v);
    }
  }
  return bfs_distances(n, kept, s)[t] < 0;
}

// Size of the smallest separating vertex set, by trying all subsets.
inline std::size_t min_cut_size(std::size_t n, const std::vector<std::pair<int, int>>& edges, int s, int t) {
  std::vector<int> others;
  for (int v = 0; v < static_cast<int>(n); ++v) {
    if (v != s && v != t) others.push_back(v);
  }
  for (std::size_t k = 0; k <= others.size(); ++k) {
    std::vector<char> pick(others.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), 1);
    do {
      std::vector<int> cut;
      for (std::size_t i = 0; i < others.size(); ++i) {
        if (pick[i]) cut.push_back(others[i]);
      }
      if (separates(n, edges, cut, s, t)) return k;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return others.size() + 1;
}

}  // namespace oracle
