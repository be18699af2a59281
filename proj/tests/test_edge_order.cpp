#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "partzdd/edge_order.hpp"
#include "partzdd/fixtures.hpp"

using namespace partzdd;

namespace {

// Frontiers by sweeping the order once with remaining-degree counters.
FrontierSequence incremental_frontiers(const Graph& g, const std::vector<EdgeIndex>& perm) {
  std::vector<std::size_t> remaining(g.vertex_count(), 0), seen(g.vertex_count(), 0);
  for (const Edge& e : g.edges()) {
    ++remaining[e.u];
    ++remaining[e.v];
  }
  FrontierSequence out{{}};
  std::vector<Vertex> front;
  for (EdgeIndex i : perm) {
    const Edge& e = g.edge(i);
    for (Vertex x : {e.u, e.v}) {
      --remaining[x];
      if (seen[x]++ == 0) front.push_back(x);
    }
    std::vector<Vertex> next;
    for (Vertex x : front) {
      if (remaining[x] > 0) next.push_back(x);
    }
    front = next;
    std::sort(next.begin(), next.end());
    out.push_back(next);
  }
  return out;
}

}  // namespace

TEST(Distances, SmallCases) {
  auto d = all_pairs_shortest(build_graph(2, {{1, 2}}));
  EXPECT_EQ(d[0][1], 1u);
  EXPECT_EQ(all_pairs_shortest(example_graph())[0][5], 3u);
  auto split = all_pairs_shortest(build_graph(4, {{1, 2}, {3, 4}}));
  EXPECT_EQ(split[0][2], kUnreachable);
  EXPECT_EQ(split[0][0], 0u);
}

TEST(Distances, MatchBfsOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 12;
    auto edges = testing_util::random_connected_edges(n, n / 3, rng);
    auto d = all_pairs_shortest(testing_util::to_graph(n, edges));
    for (std::size_t s = 0; s < n; ++s) {
      auto bfs = oracle::bfs_distances(n, edges, static_cast<int>(s));
      for (std::size_t t = 0; t < n; ++t) {
        EXPECT_EQ(d[s][t], static_cast<std::uint32_t>(bfs[t]));
        EXPECT_EQ(d[s][t], d[t][s]);
        for (std::size_t k = 0; k < n; ++k) EXPECT_LE(d[s][t], d[s][k] + d[k][t]);
      }
    }
  }
}

TEST(VertexCut, RunningExample) {
  auto cut = min_vertex_cut(example_graph(), 0, 5);
  ASSERT_EQ(cut.size(), 2u);
  std::vector<std::vector<Vertex>> allowed{{1, 2}, {1, 4}, {2, 3}, {3, 4}};
  EXPECT_NE(std::find(allowed.begin(), allowed.end(), cut), allowed.end());
  EXPECT_EQ(cut, (std::vector<Vertex>{1, 2}));  // source-side cut
}

TEST(VertexCut, PathAndErrors) {
  Graph path = grid_graph(1, 3);
  EXPECT_EQ(min_vertex_cut(path, 0, 2), (std::vector<Vertex>{1}));
  EXPECT_THROW(min_vertex_cut(path, 0, 1), DataError);
  EXPECT_THROW(min_vertex_cut(path, 1, 1), DataError);
}

TEST(VertexCut, TwoDisjointPaths) {
  // s=1, t=6; paths 1-2-3-6 and 1-4-5-6.
  Graph g = build_graph(6, {{1, 2}, {2, 3}, {3, 6}, {1, 4}, {4, 5}, {5, 6}});
  EXPECT_EQ(min_vertex_cut(g, 0, 5).size(), 2u);
}

TEST(VertexCut, MinimalByExhaustiveSearch) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 7;
    auto edges = testing_util::random_connected_edges(n, n, rng);
    Graph g = testing_util::to_graph(n, edges);
    auto adj = oracle::adjacency(n, edges);
    const int s = static_cast<int>(rng() % n), t = static_cast<int>(rng() % n);
    if (s == t || adj[s][t]) continue;
    auto cut = min_vertex_cut(g, static_cast<Vertex>(s), static_cast<Vertex>(t));
    std::vector<int> c(cut.begin(), cut.end());
    EXPECT_TRUE(oracle::separates(n, edges, c, s, t));
    EXPECT_EQ(cut.size(), oracle::min_cut_size(n, edges, s, t));
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(Frontiers, RunningExample) {
  Graph g = example_graph();
  auto f = frontiers(g, identity_order(g).perm);
  ASSERT_EQ(f.size(), 8u);
  EXPECT_EQ(f[4], (std::vector<Vertex>{2, 3}));
  EXPECT_EQ(f[5], (std::vector<Vertex>{3, 4}));
  EXPECT_TRUE(f[0].empty());
  EXPECT_TRUE(f[7].empty());
}

TEST(Frontiers, SmallShapes) {
  Graph one = build_graph(2, {{1, 2}});
  auto f = frontiers(one, std::vector<EdgeIndex>{0});
  EXPECT_TRUE(f[0].empty());
  EXPECT_TRUE(f[1].empty());
  Graph path = grid_graph(1, 7);
  auto fp = frontiers(path, identity_order(path).perm);
  for (std::size_t l = 1; l + 1 < fp.size(); ++l) EXPECT_EQ(fp[l].size(), 1u);
}

TEST(Frontiers, DefinitionMatchesSweepOnRandomOrders) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 15;
    auto edges = testing_util::random_connected_edges(n, trial % 6, rng);
    Graph g = testing_util::to_graph(n, edges);
    std::vector<EdgeIndex> perm(g.edge_count());
    std::iota(perm.begin(), perm.end(), EdgeIndex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    auto f = frontiers(g, perm);
    EXPECT_TRUE(f.front().empty());
    EXPECT_TRUE(f.back().empty());
    EXPECT_EQ(f, incremental_frontiers(g, perm));
    EXPECT_EQ(make_edge_order(g, perm).max_frontier_size, max_frontier_size(f));
  }
}

TEST(Order, SmallGraphsKeepIdentity) {
  Graph g = build_graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}});
  EXPECT_EQ(order_edges(g).perm, (std::vector<EdgeIndex>{0, 1, 2, 3, 4}));
}

TEST(Order, RunningExampleGroups) {
  Graph g = example_graph();
  auto o = order_edges(g);
  // With S = {v4, v5}: E1 = e1..e5 before E2 = {e6, e7}.
  auto pos = [&](EdgeIndex e) { return std::find(o.perm.begin(), o.perm.end(), e) - o.perm.begin(); };
  for (EdgeIndex a : {0u, 1u, 2u, 3u, 4u}) {
    for (EdgeIndex b : {5u, 6u}) EXPECT_LT(pos(a), pos(b));
  }
}

TEST(Order, PermutationAndDeterminism) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6 + trial % 20;
    auto edges = testing_util::random_connected_edges(n, n, rng);
    Graph g = testing_util::to_graph(n, edges);
    auto o = order_edges(g);
    auto sorted = o.perm;
    std::sort(sorted.begin(), sorted.end());
    for (EdgeIndex i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
    EXPECT_EQ(o.max_frontier_size, max_frontier_size(frontiers(g, o.perm)));
    EXPECT_EQ(order_edges(g), o);
  }
}

TEST(Order, GridFrontierWithinSweepBound) {
  for (std::size_t k : {4u, 6u, 8u}) {
    auto o = order_edges(grid_graph(k, k));
    EXPECT_LE(o.max_frontier_size, k + 1) << k;
  }
}

TEST(Order, RejectsDisconnected) {
  EXPECT_THROW(order_edges(build_graph(4, {{1, 2}, {3, 4}})), DataError);
}
