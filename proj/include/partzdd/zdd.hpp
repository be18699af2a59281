#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "partzdd/edge_order.hpp"
#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"

namespace partzdd {

// Terminals are 0 and 1; non-terminal node i is encoded as i + 2.
using NodeRef = std::uint64_t;
inline constexpr NodeRef kFalse = 0;
inline constexpr NodeRef kTrue = 1;

constexpr bool is_terminal(NodeRef r) noexcept { return r < 2; }
constexpr std::size_t node_index(NodeRef r) noexcept { return static_cast<std::size_t>(r - 2); }
constexpr NodeRef node_ref(std::size_t i) noexcept { return static_cast<NodeRef>(i) + 2; }

struct ZddNode {
  std::uint32_t level;  // 1-based; level l decides edge order[l-1]
  NodeRef lo;
  NodeRef hi;

  friend bool operator==(const ZddNode&, const ZddNode&) = default;
};

struct BuildStats {
  std::size_t node_count = 0;
  std::vector<std::size_t> level_width;  // index l-1 for level l
  std::size_t max_frontier_size = 0;
  std::size_t peak_state_count = 0;  // largest per-level state table
  std::size_t peak_state_bytes = 0;
};

// Quasi-reduced diagram: every arc goes from level l to level l+1 or to a
// terminal. Nodes are stored grouped by ascending level, root first.
class Zdd {
 public:
  std::size_t vertex_count = 0;
  std::size_t districts = 0;
  // Endpoints of the edge decided at each level, and its index in the graph.
  std::vector<Edge> level_edges;
  std::vector<EdgeIndex> order;
  std::size_t max_frontier_size = 0;
  std::vector<ZddNode> nodes;
  NodeRef root = kFalse;
  std::size_t peak_state_count = 0;
  std::size_t peak_state_bytes = 0;

  std::size_t levels() const noexcept { return level_edges.size(); }
  std::size_t node_count() const noexcept { return nodes.size(); }
  const ZddNode& node(NodeRef r) const { return nodes[node_index(r)]; }

  // The graph the diagram was built over, edges in their original order.
  Graph graph() const {
    std::vector<Edge> edges(level_edges.size());
    for (std::size_t l = 0; l < order.size(); ++l) edges.at(order[l]) = level_edges[l];
    return Graph(vertex_count, std::move(edges));
  }

  friend bool operator==(const Zdd&, const Zdd&) = default;
};

inline BuildStats build_stats(const Zdd& z) {
  BuildStats s;
  s.node_count = z.node_count();
  s.level_width.assign(z.levels(), 0);
  for (const auto& nd : z.nodes) ++s.level_width.at(nd.level - 1);
  s.max_frontier_size = z.max_frontier_size;
  s.peak_state_count = z.peak_state_count;
  s.peak_state_bytes = z.peak_state_bytes;
  return s;
}

inline void write_stats(std::ostream& out, const BuildStats& s) {
  std::size_t widest = 0;
  for (auto w : s.level_width) widest = std::max(widest, w);
  out << "nodes " << s.node_count << "\nmax_level_width " << widest << "\nmax_frontier " << s.max_frontier_size
      << "\npeak_states " << s.peak_state_count << "\npeak_state_bytes " << s.peak_state_bytes << "\nlevel_widths";
  for (auto w : s.level_width) out << ' ' << w;
  out << '\n';
}

// Text dump, version 1:
//   partzdd-zdd 1
//   vertices <n> districts <p> edges <m> max_frontier <f> peak_states <s> peak_state_bytes <b>
//   m lines "u v e" : endpoints (1-based) and original index (1-based), in level order
//   nodes <N>
//   N lines "level lo hi" bottom-up (root last); lo/hi are T0, T1 or the
//   0-based position of an earlier node line
//   root <T0|T1|position>
inline void write_zdd(std::ostream& out, const Zdd& z) {
  out << "partzdd-zdd 1\n";
  out << "vertices " << z.vertex_count << " districts " << z.districts << " edges " << z.levels() << " max_frontier "
      << z.max_frontier_size << " peak_states " << z.peak_state_count << " peak_state_bytes " << z.peak_state_bytes
      << '\n';
  for (std::size_t l = 0; l < z.levels(); ++l) {
    out << z.level_edges[l].u + 1 << ' ' << z.level_edges[l].v + 1 << ' ' << z.order[l] + 1 << '\n';
  }
  const std::size_t n = z.nodes.size();
  // Stored top-down; dump position of node i is n - 1 - i.
  auto ref = [&](NodeRef r) -> std::string {
    if (r == kFalse) return "T0";
    if (r == kTrue) return "T1";
    return std::to_string(n - 1 - node_index(r));
  };
  out << "nodes " << n << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const auto& nd = z.nodes[n - 1 - k];
    out << nd.level << ' ' << ref(nd.lo) << ' ' << ref(nd.hi) << '\n';
  }
  out << "root " << ref(z.root) << '\n';
}

inline Zdd read_zdd(std::istream& in) {
  auto fail = [](const std::string& what) -> DataError { return DataError("zdd dump: " + what); };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "partzdd-zdd") throw fail("missing header");
  if (version != 1) throw fail("unsupported version " + std::to_string(version));
  Zdd z;
  std::string k1, k2, k3, k4, k5, k6;
  std::size_t m = 0;
  if (!(in >> k1 >> z.vertex_count >> k2 >> z.districts >> k3 >> m >> k4 >> z.max_frontier_size >> k5 >>
        z.peak_state_count >> k6 >> z.peak_state_bytes) ||
      k1 != "vertices" || k2 != "districts" || k3 != "edges" || k4 != "max_frontier" || k5 != "peak_states" ||
      k6 != "peak_state_bytes") {
    throw fail("malformed size line");
  }
  for (std::size_t l = 0; l < m; ++l) {
    std::size_t u = 0, v = 0, e = 0;
    if (!(in >> u >> v >> e) || u == 0 || v == 0 || e == 0 || u > z.vertex_count || v > z.vertex_count || e > m) {
      throw fail("malformed edge line " + std::to_string(l + 1));
    }
    z.level_edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
    z.order.push_back(static_cast<EdgeIndex>(e - 1));
  }
  std::string kw;
  std::size_t n = 0;
  if (!(in >> kw >> n) || kw != "nodes") throw fail("missing node count");
  z.nodes.resize(n);
  auto parse_ref = [&](const std::string& tok, std::size_t pos) -> NodeRef {
    if (tok == "T0") return kFalse;
    if (tok == "T1") return kTrue;
    std::size_t idx = 0;
    try {
      idx = std::stoull(tok);
    } catch (const std::exception&) {
      throw fail("bad reference '" + tok + "'");
    }
    if (idx >= pos) throw fail("reference to a later node at line " + std::to_string(pos));
    return node_ref(n - 1 - idx);
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::string lo, hi;
    std::uint32_t level = 0;
    if (!(in >> level >> lo >> hi) || level == 0 || level > m) throw fail("malformed node line " + std::to_string(k));
    z.nodes[n - 1 - k] = {level, parse_ref(lo, k), parse_ref(hi, k)};
  }
  std::string root;
  if (!(in >> kw >> root) || kw != "root") throw fail("missing root");
  z.root = parse_ref(root, n);
  for (const auto& nd : z.nodes) {
    for (NodeRef c : {nd.lo, nd.hi}) {
      if (!is_terminal(c) && z.node(c).level != nd.level + 1) throw fail("arc skips a level");
    }
  }
  return z;
}

}  // namespace partzdd
