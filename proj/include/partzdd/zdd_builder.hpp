#pragma once

// Frontier-based construction of the diagram of all partitions of a
// connected graph into exactly p connected districts.
//
// A node at level l carries a state over the frontier F_{l-1}:
//   comp  component of each frontier vertex, named by the position (in the
//         sorted frontier) of the largest frontier vertex in that component
//   dcc   number of components already closed off
//   fps   pairs of frontier components that must never be joined, because
//         an edge between them was dropped
// Nodes with equal states at the same level are shared.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "partzdd/edge_order.hpp"
#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/zdd.hpp"

namespace partzdd {

struct BuildOptions {
  // Share nodes with identical states. Disabling yields a plain search tree.
  bool merge_nodes = true;
  // Approximate cap on node storage plus state tables; exceeded -> ResourceError.
  std::optional<std::size_t> memory_cap_bytes;
};

// Decoded frontier state. `comp` is indexed by frontier position; component
// names are frontier positions. Pairs are (smaller, larger), sorted.
struct FrontierState {
  std::uint32_t dcc = 0;
  std::vector<std::uint16_t> comp;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> fps;

  friend bool operator==(const FrontierState&, const FrontierState&) = default;
};

// Renames every component to the position of its largest member, drops
// pairs that mention absent components, and sorts the pair list.
inline FrontierState normalize(FrontierState s) {
  const std::size_t k = s.comp.size();
  std::vector<std::uint16_t> rename(65536, 0xFFFF);
  std::vector<char> present(65536, 0);
  for (std::size_t i = 0; i < k; ++i) rename[s.comp[i]] = static_cast<std::uint16_t>(i);
  for (std::size_t i = 0; i < k; ++i) present[s.comp[i]] = 1;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> pairs;
  for (auto [a, b] : s.fps) {
    if (!present[a] || !present[b]) continue;
    auto x = rename[a], y = rename[b];
    pairs.emplace_back(std::min(x, y), std::max(x, y));
  }
  for (auto& c : s.comp) c = rename[c];
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  s.fps = std::move(pairs);
  return s;
}

inline std::string encode_state(const FrontierState& s) {
  std::string key(2 * (2 + s.comp.size() + 2 * s.fps.size()), '\0');
  auto* p = key.data();
  auto put = [&](std::uint16_t v) {
    std::memcpy(p, &v, 2);
    p += 2;
  };
  put(static_cast<std::uint16_t>(s.dcc));
  put(static_cast<std::uint16_t>(s.comp.size()));
  for (auto c : s.comp) put(c);
  for (auto [a, b] : s.fps) {
    put(a);
    put(b);
  }
  return key;
}

inline FrontierState decode_state(std::string_view key) {
  const char* p = key.data();
  auto get = [&]() {
    std::uint16_t v;
    std::memcpy(&v, p, 2);
    p += 2;
    return v;
  };
  FrontierState s;
  s.dcc = get();
  const std::size_t k = get();
  s.comp.resize(k);
  for (auto& c : s.comp) c = get();
  const std::size_t pairs = (key.size() / 2 - 2 - k) / 2;
  s.fps.resize(pairs);
  for (auto& pr : s.fps) {
    pr.first = get();
    pr.second = get();
  }
  return s;
}

namespace detail {

// Static per-level data: the edge, the frontiers around it, and how many
// vertices have not been touched yet.
struct LevelPlan {
  Vertex u, v;
  std::vector<Vertex> work;              // F_{l-1} ∪ {u, v}, sorted
  std::vector<std::uint16_t> prev_pos;   // work position of each F_{l-1} vertex
  std::vector<std::uint16_t> next_pos;   // work position of each F_l vertex
  std::vector<std::uint16_t> leaving;    // work positions not in F_l
  std::uint16_t u_pos, v_pos;
  std::size_t untouched_after;
};

inline std::vector<LevelPlan> plan_levels(const Graph& g, const std::vector<EdgeIndex>& perm) {
  const auto f = frontiers(g, perm);
  const std::size_t m = perm.size();
  std::vector<char> touched(g.vertex_count(), 0);
  std::size_t untouched = g.vertex_count();
  std::vector<LevelPlan> plans(m);
  for (std::size_t l = 1; l <= m; ++l) {
    auto& lp = plans[l - 1];
    const Edge& e = g.edge(perm[l - 1]);
    lp.u = e.u;
    lp.v = e.v;
    lp.work = f[l - 1];
    for (Vertex x : {e.u, e.v}) {
      if (!std::binary_search(lp.work.begin(), lp.work.end(), x)) {
        lp.work.insert(std::upper_bound(lp.work.begin(), lp.work.end(), x), x);
      }
      if (!touched[x]) {
        touched[x] = 1;
        --untouched;
      }
    }
    if (lp.work.size() > 0xFFFF) throw DataError("frontier too large");
    auto pos = [&](Vertex x) {
      return static_cast<std::uint16_t>(std::lower_bound(lp.work.begin(), lp.work.end(), x) - lp.work.begin());
    };
    for (Vertex x : f[l - 1]) lp.prev_pos.push_back(pos(x));
    for (Vertex x : f[l]) lp.next_pos.push_back(pos(x));
    for (std::uint16_t i = 0; i < lp.work.size(); ++i) {
      if (!std::binary_search(f[l].begin(), f[l].end(), lp.work[i])) lp.leaving.push_back(i);
    }
    lp.u_pos = pos(e.u);
    lp.v_pos = pos(e.v);
    lp.untouched_after = untouched;
  }
  return plans;
}

// Size of a clique found greedily in the forbidden-pair graph over k
// components; a lower bound on how many districts they still need.
inline std::size_t forbidden_clique_bound(std::size_t k, const std::vector<std::pair<std::uint16_t, std::uint16_t>>& fps) {
  if (fps.empty()) return k > 0 ? 1 : 0;
  std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
  for (auto [a, b] : fps) adj[a][b] = adj[b][a] = 1;
  std::size_t best = 2;
  std::vector<std::uint16_t> clique;
  for (std::uint16_t start = 0; start < k; ++start) {
    clique.assign(1, start);
    for (std::uint16_t c = 0; c < k; ++c) {
      if (c == start) continue;
      bool ok = std::all_of(clique.begin(), clique.end(), [&](auto x) { return adj[x][c] != 0; });
      if (ok) clique.push_back(c);
    }
    best = std::max(best, clique.size());
  }
  return best;
}

class Builder {
 public:
  Builder(const Graph& g, const EdgeOrder& order, std::size_t p, const BuildOptions& opt)
      : g_(g), order_(order), p_(p), opt_(opt), plans_(plan_levels(g, order.perm)) {}

  Zdd run() {
    Zdd z;
    z.vertex_count = g_.vertex_count();
    z.districts = p_;
    z.order = order_.perm;
    z.max_frontier_size = order_.max_frontier_size;
    for (auto e : order_.perm) z.level_edges.push_back(g_.edge(e));
    const std::size_t m = plans_.size();
    if (m == 0) {
      z.root = p_ == g_.vertex_count() ? kTrue : kFalse;
      return z;
    }
    std::vector<std::string> current{encode_state(FrontierState{})};
    z.nodes.push_back({1, kFalse, kFalse});
    z.root = node_ref(0);
    std::size_t level_begin = 0;
    for (std::size_t l = 1; l <= m; ++l) {
      std::unordered_map<std::string, NodeRef> next_table;
      std::vector<std::string> next_keys;
      const std::size_t width = current.size();
      for (std::size_t i = 0; i < width; ++i) {
        const FrontierState s = decode_state(current[i]);
        NodeRef kids[2];
        for (int arc = 0; arc < 2; ++arc) {
          auto child = transition(plans_[l - 1], l == m, s, arc == 1);
          if (!child) {
            kids[arc] = kFalse;
          } else if (l == m) {
            kids[arc] = *child == "1" ? kTrue : kFalse;
          } else if (opt_.merge_nodes) {
            auto [it, inserted] = next_table.try_emplace(*child, node_ref(z.nodes.size()));
            if (inserted) {
              z.nodes.push_back({static_cast<std::uint32_t>(l + 1), kFalse, kFalse});
              next_keys.push_back(*child);
              state_bytes_ += child->size() + kTableEntryOverhead;
            }
            kids[arc] = it->second;
          } else {
            kids[arc] = node_ref(z.nodes.size());
            z.nodes.push_back({static_cast<std::uint32_t>(l + 1), kFalse, kFalse});
            state_bytes_ += child->size() + sizeof(std::string);
            next_keys.push_back(std::move(*child));
          }
          check_memory(z, l + 1, next_keys.size());
        }
        auto& nd = z.nodes[level_begin + i];
        nd.lo = kids[0];
        nd.hi = kids[1];
      }
      peak_states_ = std::max(peak_states_, next_keys.size());
      peak_bytes_ = std::max(peak_bytes_, state_bytes_);
      level_begin += width;
      current = std::move(next_keys);
      state_bytes_ = 0;
      for (const auto& k : current) state_bytes_ += k.size() + sizeof(std::string);
    }
    z.peak_state_count = peak_states_;
    z.peak_state_bytes = peak_bytes_;
    return z;
  }

 private:
  static constexpr std::size_t kTableEntryOverhead = 2 * sizeof(std::string) + 32;

  void check_memory(const Zdd& z, std::size_t level, std::size_t width) const {
    if (!opt_.memory_cap_bytes) return;
    const std::size_t used = z.nodes.size() * sizeof(ZddNode) + state_bytes_;
    if (used > *opt_.memory_cap_bytes) {
      throw ResourceError("memory cap of " + std::to_string(*opt_.memory_cap_bytes) + " bytes reached at level " +
                              std::to_string(level) + " (level width " + std::to_string(width) + ", nodes " +
                              std::to_string(z.nodes.size()) + ")",
                          level, width);
    }
  }

  // Encoded child state, "1" for an accepting final arc, or nullopt for the
  // 0-terminal.
  std::optional<std::string> transition(const LevelPlan& lp, bool last, const FrontierState& s, bool take) {
    const std::size_t w = lp.work.size();
    // Component names during the step are work positions.
    work_comp_.resize(w);
    for (std::size_t i = 0; i < w; ++i) work_comp_[i] = static_cast<std::uint16_t>(i);
    for (std::size_t i = 0; i < lp.prev_pos.size(); ++i) work_comp_[lp.prev_pos[i]] = lp.prev_pos[s.comp[i]];
    pairs_.clear();
    for (auto [a, b] : s.fps) pairs_.emplace_back(lp.prev_pos[a], lp.prev_pos[b]);

    const std::uint16_t cu = work_comp_[lp.u_pos], cv = work_comp_[lp.v_pos];
    const std::uint16_t lo = std::min(cu, cv), hi = std::max(cu, cv);
    const bool forbidden = std::find(pairs_.begin(), pairs_.end(), std::pair{lo, hi}) != pairs_.end();
    if (!take) {
      if (cu == cv) return std::nullopt;  // an edge inside a district must be kept
      if (!forbidden) pairs_.emplace_back(lo, hi);
    } else if (cu != cv) {
      if (forbidden) return std::nullopt;
      // Larger name survives; since names are positions of sorted vertices
      // this is the component holding the larger vertex index.
      for (auto& c : work_comp_) {
        if (c == lo) c = hi;
      }
      for (auto& [a, b] : pairs_) {
        if (a == lo) a = hi;
        if (b == lo) b = hi;
        if (a > b) std::swap(a, b);
      }
    }

    std::uint32_t dcc = s.dcc;
    present_.assign(w, 0);
    for (auto pos : lp.next_pos) present_[work_comp_[pos]] = 1;
    closed_.assign(w, 0);
    for (auto pos : lp.leaving) {
      const auto c = work_comp_[pos];
      if (!present_[c] && !closed_[c]) {
        closed_[c] = 1;
        ++dcc;
      }
    }
    if (dcc > p_) return std::nullopt;
    if (last) return dcc == p_ ? std::optional<std::string>("1") : std::nullopt;

    FrontierState out;
    out.dcc = dcc;
    out.comp.reserve(lp.next_pos.size());
    // Rename each surviving component to the frontier position of its largest member.
    rename_.assign(w, 0xFFFF);
    for (std::size_t i = 0; i < lp.next_pos.size(); ++i) rename_[work_comp_[lp.next_pos[i]]] = static_cast<std::uint16_t>(i);
    std::size_t comps = 0;
    for (std::size_t i = 0; i < lp.next_pos.size(); ++i) {
      const auto r = rename_[work_comp_[lp.next_pos[i]]];
      out.comp.push_back(r);
      if (r == i) ++comps;
    }
    for (auto [a, b] : pairs_) {
      if (!present_[a] || !present_[b]) continue;
      auto x = rename_[a], y = rename_[b];
      out.fps.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(out.fps.begin(), out.fps.end());
    out.fps.erase(std::unique(out.fps.begin(), out.fps.end()), out.fps.end());

    // Frontier components each end in at least one further district; pairwise
    // forbidden ones in distinct districts. Each untouched vertex can add at most one.
    if (dcc + forbidden_clique_bound(lp.next_pos.size(), out.fps) > p_) return std::nullopt;
    if (dcc + comps + lp.untouched_after < p_) return std::nullopt;
    return encode_state(out);
  }

  const Graph& g_;
  const EdgeOrder& order_;
  std::size_t p_;
  BuildOptions opt_;
  std::vector<LevelPlan> plans_;
  std::size_t state_bytes_ = 0;
  std::size_t peak_states_ = 1;
  std::size_t peak_bytes_ = 0;
  std::vector<std::uint16_t> work_comp_, rename_;
  std::vector<char> present_, closed_;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> pairs_;
};

}  // namespace detail

// Root-to-1 paths correspond one-to-one to partitions of g into exactly p
// connected districts (reading 1-arcs as retained edges). p larger than the
// vertex count yields the empty family.
inline Zdd build_zdd(const Graph& g, const EdgeOrder& order, std::size_t p, const BuildOptions& opt = {}) {
  if (p == 0) throw DataError("number of districts must be at least 1");
  if (p > 0xFFFF) throw DataError("number of districts exceeds 65535");
  if (!is_connected(g)) throw DataError("graph is not connected");
  if (order.perm.size() != g.edge_count()) throw DataError("edge order does not match graph");
  return detail::Builder(g, order, p, opt).run();
}

inline Zdd build_zdd(const Graph& g, std::size_t p, const BuildOptions& opt = {}) {
  return build_zdd(g, order_edges(g), p, opt);
}

}  // namespace partzdd
