#pragma once

// Contiguity graph, vertex attributes, and the two equivalent plan
// representations (vertex labeling and retained edge set).
//
// Vertices are 0-based internally. Every file format and user-facing message
// uses 1-based indices.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "partzdd/error.hpp"

namespace partzdd {

using Vertex = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Graph() = default;

  // Edge order is preserved: edges()[i] is e_{i+1}.
  Graph(std::size_t vertex_count, std::vector<Edge> edges)
      : n_(vertex_count), edges_(std::move(edges)), adj_(vertex_count), inc_(vertex_count) {
    if (n_ == 0) throw DataError("graph must have at least one vertex");
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto [u, v] = edges_[i];
      const std::string where = "edge " + std::to_string(i + 1) + " (" + std::to_string(u + 1) +
                                "," + std::to_string(v + 1) + ")";
      if (u >= n_ || v >= n_) throw DataError(where + ": vertex index out of range");
      if (u == v) throw DataError(where + ": self-loop");
      if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
        throw DataError(where + ": duplicate edge");
      adj_[u].push_back(v);
      adj_[v].push_back(u);
      inc_[u].push_back(static_cast<EdgeIndex>(i));
      inc_[v].push_back(static_cast<EdgeIndex>(i));
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex i) const { return edges_.at(i); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
  std::span<const EdgeIndex> incident_edges(Vertex v) const { return inc_.at(v); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::vector<EdgeIndex>> inc_;
};

// 1-based vertex pairs, as they appear in files and in the literature.
inline Graph build_graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    if (a < 1 || b < 1 || a > n || b > n) {
      throw DataError("edge " + std::to_string(i + 1) + " (" + std::to_string(a) + "," +
                      std::to_string(b) + "): vertex index out of range");
    }
    out.push_back({static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1)});
  }
  return Graph(n, std::move(out));
}

inline Graph build_graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::pair<std::size_t, std::size_t>> v(edges);
  return build_graph(n, std::span<const std::pair<std::size_t, std::size_t>>(v));
}

// Rook-adjacency grid. Vertex (r, c) has index r * cols + c; edges are listed
// row-major, each vertex contributing its right then its down edge.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DataError("grid dimensions must be positive");
  std::vector<Edge> edges;
  edges.reserve(2 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols)});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

// Grid plus the down-right diagonal of every cell: a planar triangulation,
// closer to precinct adjacency than the plain grid.
inline Graph triangulated_grid_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DataError("grid dimensions must be positive");
  std::vector<Edge> edges;
  edges.reserve(3 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols)});
      if (c + 1 < cols && r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols + 1)});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

// Grid with both diagonals of every cell (queen adjacency).
inline Graph queen_grid_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DataError("grid dimensions must be positive");
  std::vector<Edge> edges;
  edges.reserve(4 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols)});
      if (c + 1 < cols && r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols + 1)});
      if (c > 0 && r + 1 < rows) edges.push_back({v, static_cast<Vertex>(v + cols - 1)});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

// Component id per vertex (0-based, in order of smallest member), using only
// the edges for which `keep(edge_index)` holds.
template <typename Keep>
std::vector<std::uint32_t> component_labels(const Graph& g, Keep&& keep) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(g.vertex_count(), kUnset);
  std::uint32_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (EdgeIndex e : g.incident_edges(x)) {
        if (!keep(e)) continue;
        const Edge& ed = g.edge(e);
        Vertex y = ed.u == x ? ed.v : ed.u;
        if (label[y] == kUnset) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

inline bool is_connected(const Graph& g) {
  auto lab = component_labels(g, [](EdgeIndex) { return true; });
  return std::all_of(lab.begin(), lab.end(), [](auto l) { return l == 0; });
}

// True when the vertices with member[v] set induce a connected subgraph.
// An empty member set is reported as not connected.
inline bool induces_connected(const Graph& g, const std::vector<char>& member) {
  auto first = std::find(member.begin(), member.end(), char{1});
  if (first == member.end()) return false;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack{static_cast<Vertex>(first - member.begin())};
  seen[stack.back()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : g.neighbors(x)) {
      if (member[y] && !seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == static_cast<std::size_t>(std::count(member.begin(), member.end(), char{1}));
}

// Unlabeled partition of the vertex set, stored with canonical labels 1..p
// assigned in order of first occurrence by vertex index.
class Partition {
 public:
  Partition() = default;

  // Accepts any labeling (arbitrary integers); relabels canonically.
  template <typename Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition pt;
    pt.district_of_.resize(labels.size());
    std::vector<std::pair<Label, std::uint32_t>> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == labels[i]; });
      if (it == seen.end()) {
        seen.emplace_back(labels[i], static_cast<std::uint32_t>(seen.size() + 1));
        pt.district_of_[i] = static_cast<std::uint32_t>(seen.size());
      } else {
        pt.district_of_[i] = it->second;
      }
    }
    pt.p_ = seen.size();
    return pt;
  }

  template <typename Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  // Requires labels already canonical; throws otherwise.
  static Partition from_canonical(std::vector<std::uint32_t> labels) {
    std::uint32_t max_seen = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == 0 || labels[i] > max_seen + 1) {
        throw DataError("non-canonical district label " + std::to_string(labels[i]) + " at vertex " +
                        std::to_string(i + 1));
      }
      max_seen = std::max(max_seen, labels[i]);
    }
    Partition pt;
    pt.district_of_ = std::move(labels);
    pt.p_ = max_seen;
    return pt;
  }

  std::size_t vertex_count() const noexcept { return district_of_.size(); }
  std::size_t district_count() const noexcept { return p_; }
  // 1-based district label of 0-based vertex v.
  std::uint32_t district(Vertex v) const { return district_of_.at(v); }
  const std::vector<std::uint32_t>& labels() const noexcept { return district_of_; }

  std::vector<std::vector<Vertex>> districts() const {
    std::vector<std::vector<Vertex>> out(p_);
    for (Vertex v = 0; v < district_of_.size(); ++v) out[district_of_[v] - 1].push_back(v);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.district_of_ <=> b.district_of_; }

 private:
  std::vector<std::uint32_t> district_of_;
  std::size_t p_ = 0;
};

// Throws DataError describing the first violated condition.
inline void check_partition(const Graph& g, const Partition& pt, std::optional<std::size_t> p = std::nullopt) {
  if (pt.vertex_count() != g.vertex_count()) {
    throw DataError("plan has " + std::to_string(pt.vertex_count()) + " labels but graph has " +
                    std::to_string(g.vertex_count()) + " vertices");
  }
  if (p && pt.district_count() != *p) {
    throw DataError("plan has " + std::to_string(pt.district_count()) + " districts, expected " +
                    std::to_string(*p));
  }
  for (std::uint32_t d = 1; d <= pt.district_count(); ++d) {
    std::vector<char> member(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) member[v] = pt.district(v) == d;
    if (!induces_connected(g, member)) throw DataError("district " + std::to_string(d) + " is not connected");
  }
}

inline bool is_valid_partition(const Graph& g, const Partition& pt, std::optional<std::size_t> p = std::nullopt) {
  try {
    check_partition(g, pt, p);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

// Retained edges, as sorted 0-based edge indices.
struct EdgeSetPlan {
  std::vector<EdgeIndex> retained;

  friend bool operator==(const EdgeSetPlan&, const EdgeSetPlan&) = default;
};

inline EdgeSetPlan partition_to_edge_set(const Graph& g, const Partition& pt) {
  if (pt.vertex_count() != g.vertex_count()) throw DataError("plan size does not match graph");
  EdgeSetPlan es;
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    if (pt.district(e.u) == pt.district(e.v)) es.retained.push_back(i);
  }
  return es;
}

// Districts are the components of the retained subgraph. Every dropped edge
// must join two different components (induced-subgraph closure).
inline Partition edge_set_to_partition(const Graph& g, const EdgeSetPlan& es) {
  std::vector<char> keep(g.edge_count(), 0);
  for (EdgeIndex e : es.retained) {
    if (e >= g.edge_count()) throw DataError("edge index " + std::to_string(e + 1) + " out of range");
    keep[e] = 1;
  }
  auto lab = component_labels(g, [&](EdgeIndex e) { return keep[e] != 0; });
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    if (!keep[i] && lab[e.u] == lab[e.v]) {
      throw DataError("invalid plan: edge " + std::to_string(i + 1) + " joins vertices " +
                      std::to_string(e.u + 1) + " and " + std::to_string(e.v + 1) +
                      " of one district but is not retained");
    }
  }
  return Partition::from_labels(lab);
}

// Subgraph induced by `vertices` (0-based, any order). Returned graph numbers
// vertices by their position in the sorted input; edges keep relative order.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> original;  // local -> parent vertex
};

inline InducedSubgraph induced_subgraph(const Graph& g, std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  constexpr auto kAbsent = static_cast<Vertex>(-1);
  std::vector<Vertex> local(g.vertex_count(), kAbsent);
  for (Vertex i = 0; i < vertices.size(); ++i) local.at(vertices[i]) = i;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] != kAbsent && local[e.v] != kAbsent) edges.push_back({local[e.u], local[e.v]});
  }
  return {Graph(vertices.size(), std::move(edges)), std::move(vertices)};
}

}  // namespace partzdd
