#pragma once

// Edge processing orders with small frontiers, and frontier computation.
//
// The ordering heuristic picks the two vertices farthest apart, separates
// them with a minimum vertex cut, and recurses into each side with the cut
// contracted to a single vertex that acts as the sink of the earlier side and
// the source of the later one.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"

namespace partzdd {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

using DistanceMatrix = std::vector<std::vector<std::uint32_t>>;

// F_0..F_m; each frontier sorted ascending.
using FrontierSequence = std::vector<std::vector<Vertex>>;

struct EdgeOrder {
  std::vector<EdgeIndex> perm;  // perm[l] = original index of the (l+1)-th processed edge
  std::size_t max_frontier_size = 0;

  friend bool operator==(const EdgeOrder&, const EdgeOrder&) = default;
};

namespace detail {

using AdjList = std::vector<std::vector<std::uint32_t>>;

inline DistanceMatrix floyd_warshall(const AdjList& adj) {
  const std::size_t n = adj.size();
  DistanceMatrix d(n, std::vector<std::uint32_t>(n, kUnreachable));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (auto j : adj[i]) {
      if (j != i) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kUnreachable) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

// Unit-vertex-capacity max flow on the split network (v_in = 2v, v_out = 2v+1).
// Returns the source-side minimum cut: vertices whose in-copy is reachable
// from s in the residual network but whose out-copy is not.
class VertexCutSolver {
 public:
  explicit VertexCutSolver(const AdjList& adj) : n_(adj.size()), adj_(adj) {}

  std::vector<std::uint32_t> solve(std::uint32_t s, std::uint32_t t) {
    const std::size_t nodes = 2 * n_;
    head_.assign(nodes, -1);
    arcs_.clear();
    const std::int64_t inf = static_cast<std::int64_t>(n_) + 1;
    for (std::uint32_t v = 0; v < n_; ++v) add_arc(2 * v, 2 * v + 1, (v == s || v == t) ? inf : 1);
    for (std::uint32_t v = 0; v < n_; ++v) {
      for (auto w : adj_[v]) {
        if (w != v) add_arc(2 * v + 1, 2 * w, inf);
      }
    }
    const std::uint32_t source = 2 * s + 1, sink = 2 * t;
    std::vector<int> via(nodes);
    while (true) {
      std::fill(via.begin(), via.end(), -2);
      via[source] = -1;
      std::deque<std::uint32_t> q{source};
      while (!q.empty() && via[sink] == -2) {
        auto x = q.front();
        q.pop_front();
        for (int a = head_[x]; a != -1; a = arcs_[a].next) {
          if (arcs_[a].cap > 0 && via[arcs_[a].to] == -2) {
            via[arcs_[a].to] = a;
            q.push_back(arcs_[a].to);
          }
        }
      }
      if (via[sink] == -2) break;
      for (auto x = sink; x != source;) {
        int a = via[x];
        arcs_[a].cap -= 1;
        arcs_[a ^ 1].cap += 1;
        x = arcs_[a ^ 1].to;
      }
    }
    std::vector<std::uint32_t> cut;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (via[2 * v] != -2 && via[2 * v + 1] == -2) cut.push_back(v);
    }
    return cut;
  }

 private:
  struct Arc {
    std::uint32_t to;
    std::int64_t cap;
    int next;
  };

  void add_arc(std::uint32_t a, std::uint32_t b, std::int64_t cap) {
    arcs_.push_back({b, cap, head_[a]});
    head_[a] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({a, 0, head_[b]});
    head_[b] = static_cast<int>(arcs_.size()) - 1;
  }

  std::size_t n_;
  const AdjList& adj_;
  std::vector<int> head_;
  std::vector<Arc> arcs_;
};

inline AdjList adjacency(const Graph& g) {
  AdjList adj(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  return adj;
}

}  // namespace detail

// Hop distances; kUnreachable between different components.
inline DistanceMatrix all_pairs_shortest(const Graph& g) { return detail::floyd_warshall(detail::adjacency(g)); }

// Minimum set of vertices (excluding s and t) whose removal disconnects s
// from t. Among minimum cuts the one closest to s is returned, sorted.
inline std::vector<Vertex> min_vertex_cut(const Graph& g, Vertex s, Vertex t) {
  if (s >= g.vertex_count() || t >= g.vertex_count()) throw DataError("vertex out of range");
  if (s == t) throw DataError("min_vertex_cut: s and t coincide");
  auto nb = g.neighbors(s);
  if (std::find(nb.begin(), nb.end(), t) != nb.end()) {
    throw DataError("min_vertex_cut: s and t are adjacent, no separating vertex set exists");
  }
  auto adj = detail::adjacency(g);
  auto cut = detail::VertexCutSolver(adj).solve(s, t);
  return {cut.begin(), cut.end()};
}

inline FrontierSequence frontiers(const Graph& g, std::span<const EdgeIndex> perm) {
  const std::size_t m = perm.size();
  if (m != g.edge_count()) throw DataError("order length does not match edge count");
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> first(g.vertex_count(), kNone), last(g.vertex_count(), 0);
  for (std::size_t l = 1; l <= m; ++l) {
    const Edge& e = g.edge(perm[l - 1]);
    for (Vertex v : {e.u, e.v}) {
      if (first[v] == kNone) first[v] = l;
      last[v] = l;
    }
  }
  FrontierSequence f(m + 1);
  for (std::size_t l = 0; l <= m; ++l) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (first[v] != kNone && first[v] <= l && l < last[v]) f[l].push_back(v);
    }
  }
  return f;
}

inline std::size_t max_frontier_size(const FrontierSequence& f) {
  std::size_t best = 0;
  for (const auto& s : f) best = std::max(best, s.size());
  return best;
}

// Validates `perm` as a permutation of g's edges and measures it.
inline EdgeOrder make_edge_order(const Graph& g, std::vector<EdgeIndex> perm) {
  std::vector<char> seen(g.edge_count(), 0);
  if (perm.size() != g.edge_count()) throw DataError("edge order is not a permutation of the edges");
  for (auto e : perm) {
    if (e >= g.edge_count() || seen[e]) throw DataError("edge order is not a permutation of the edges");
    seen[e] = 1;
  }
  EdgeOrder o{std::move(perm), 0};
  o.max_frontier_size = max_frontier_size(frontiers(g, o.perm));
  return o;
}

inline EdgeOrder identity_order(const Graph& g) {
  std::vector<EdgeIndex> perm(g.edge_count());
  std::iota(perm.begin(), perm.end(), EdgeIndex{0});
  return make_edge_order(g, std::move(perm));
}

namespace detail {

// A subproblem of the ordering recursion. Vertices are local ids sorted by
// `key` (smallest original vertex contained); a contracted cut is one vertex.
struct OrderProblem {
  struct Item {
    EdgeIndex original;
    std::uint32_t a, b;
  };
  std::vector<Vertex> key;
  std::vector<Item> items;
  std::optional<std::uint32_t> source;
  std::optional<std::uint32_t> sink;
};

class EdgeOrderer {
 public:
  explicit EdgeOrderer(std::size_t leaf_edges) : leaf_edges_(leaf_edges) {}

  void solve(const OrderProblem& pr, std::vector<EdgeIndex>& out) const {
    if (pr.items.size() <= leaf_edges_) return leaf(pr, out);
    const std::size_t k = pr.key.size();
    AdjList adj(k);
    for (const auto& it : pr.items) {
      adj[it.a].push_back(it.b);
      adj[it.b].push_back(it.a);
    }
    for (auto& a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    auto dist = floyd_warshall(adj);
    auto pair = choose_terminals(pr, dist);
    if (!pair) return leaf(pr, out);
    auto [s, t] = *pair;
    auto cut = VertexCutSolver(adj).solve(s, t);

    std::vector<char> in_cut(k, 0);
    for (auto c : cut) in_cut[c] = 1;
    constexpr auto kNone = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> comp(k, kNone);
    std::vector<std::vector<std::uint32_t>> comps;
    for (std::uint32_t v = 0; v < k; ++v) {
      if (in_cut[v] || comp[v] != kNone) continue;
      const auto id = static_cast<std::uint32_t>(comps.size());
      comps.push_back({v});
      comp[v] = id;
      for (std::size_t i = 0; i < comps.back().size(); ++i) {
        for (auto w : adj[comps.back()[i]]) {
          if (!in_cut[w] && comp[w] == kNone) {
            comp[w] = id;
            comps.back().push_back(w);
          }
        }
      }
    }
    // s-side first, t-side last, any others by smallest key in between.
    // Local ids are sorted by key, so a component's smallest id has its smallest key.
    std::vector<std::uint32_t> rank(comps.size());
    std::iota(rank.begin(), rank.end(), 0u);
    std::sort(rank.begin(), rank.end(), [&](auto x, auto y) {
      auto pos = [&](std::uint32_t c) { return c == comp[s] ? 0 : c == comp[t] ? 2 : 1; };
      if (pos(x) != pos(y)) return pos(x) < pos(y);
      return *std::min_element(comps[x].begin(), comps[x].end()) <
             *std::min_element(comps[y].begin(), comps[y].end());
    });

    Vertex super_key = std::numeric_limits<Vertex>::max();
    for (auto c : cut) super_key = std::min(super_key, pr.key[c]);

    std::vector<EdgeIndex> inside_cut;
    for (const auto& it : pr.items) {
      if (in_cut[it.a] && in_cut[it.b]) inside_cut.push_back(it.original);
    }
    std::sort(inside_cut.begin(), inside_cut.end());

    for (std::size_t r = 0; r < rank.size(); ++r) {
      const auto c = rank[r];
      OrderProblem sub;
      std::vector<std::pair<Vertex, std::uint32_t>> members;  // (key, old id); kNone marks the cut
      for (auto v : comps[c]) members.emplace_back(pr.key[v], v);
      members.emplace_back(super_key, kNone);
      std::sort(members.begin(), members.end());
      std::vector<std::uint32_t> local(k, kNone);
      std::uint32_t super_local = 0;
      for (std::uint32_t i = 0; i < members.size(); ++i) {
        sub.key.push_back(members[i].first);
        if (members[i].second == kNone) super_local = i;
        else local[members[i].second] = i;
      }
      for (auto v : cut) local[v] = super_local;
      for (const auto& it : pr.items) {
        const bool a_in = comp[it.a] == c && !in_cut[it.a];
        const bool b_in = comp[it.b] == c && !in_cut[it.b];
        if (!(a_in || b_in)) continue;
        sub.items.push_back({it.original, local[it.a], local[it.b]});
      }
      if (r == 0) {
        sub.source = local[s];
        sub.sink = super_local;
      } else {
        sub.source = super_local;
        if (r + 1 == rank.size()) sub.sink = local[t];
      }
      solve(sub, out);
      if (r == 0) out.insert(out.end(), inside_cut.begin(), inside_cut.end());
    }
  }

 private:
  // Edges on the incoming side first, those on the outgoing side last.
  static void leaf(const OrderProblem& pr, std::vector<EdgeIndex>& out) {
    auto group = [&](const OrderProblem::Item& it) {
      if (pr.source && (it.a == *pr.source || it.b == *pr.source)) return 0;
      if (pr.sink && (it.a == *pr.sink || it.b == *pr.sink)) return 2;
      return 1;
    };
    std::vector<OrderProblem::Item> items = pr.items;
    std::sort(items.begin(), items.end(), [&](const auto& x, const auto& y) {
      if (group(x) != group(y)) return group(x) < group(y);
      return x.original < y.original;
    });
    for (const auto& it : items) out.push_back(it.original);
  }

  // Terminal candidates in priority order; first pair at distance >= 2 wins.
  static std::optional<std::pair<std::uint32_t, std::uint32_t>> choose_terminals(const OrderProblem& pr,
                                                                                 const DistanceMatrix& d) {
    const std::size_t k = pr.key.size();
    auto usable = [&](std::uint32_t a, std::uint32_t b) {
      return a != b && d[a][b] != kUnreachable && d[a][b] >= 2;
    };
    auto farthest_from = [&](std::uint32_t a) {
      std::uint32_t best = a;
      for (std::uint32_t v = 0; v < k; ++v) {
        if (d[a][v] != kUnreachable && (best == a || d[a][v] > d[a][best])) best = v;
      }
      return best;
    };
    if (pr.source && pr.sink && usable(*pr.source, *pr.sink)) return std::pair{*pr.source, *pr.sink};
    if (pr.source) {
      auto t = farthest_from(*pr.source);
      if (usable(*pr.source, t)) return std::pair{*pr.source, t};
    }
    if (pr.sink) {
      auto s = farthest_from(*pr.sink);
      if (usable(s, *pr.sink)) return std::pair{s, *pr.sink};
    }
    std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
    std::uint32_t best_d = 1;
    for (std::uint32_t a = 0; a < k; ++a) {
      for (std::uint32_t b = a + 1; b < k; ++b) {
        if (d[a][b] != kUnreachable && d[a][b] > best_d) {
          best_d = d[a][b];
          best = std::pair{a, b};
        }
      }
    }
    return best;
  }

  std::size_t leaf_edges_;
};

}  // namespace detail

inline constexpr std::size_t kDefaultLeafEdges = 5;

// Deterministic frontier-reducing edge order for a connected graph.
// Subgraphs with at most `leaf_edges` edges are emitted by ascending index.
inline EdgeOrder order_edges(const Graph& g, std::size_t leaf_edges = kDefaultLeafEdges) {
  if (!is_connected(g)) throw DataError("order_edges: graph is not connected");
  detail::OrderProblem root;
  root.key.resize(g.vertex_count());
  std::iota(root.key.begin(), root.key.end(), Vertex{0});
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) root.items.push_back({i, g.edge(i).u, g.edge(i).v});
  std::vector<EdgeIndex> perm;
  perm.reserve(g.edge_count());
  detail::EdgeOrderer(leaf_edges).solve(root, perm);
  return make_edge_order(g, std::move(perm));
}

}  // namespace partzdd
