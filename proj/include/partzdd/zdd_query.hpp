#pragma once

// Counting, enumeration and exact uniform sampling over a built diagram.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/random.hpp"
#include "partzdd/zdd.hpp"

namespace partzdd {

// c(v) = number of paths from v to the 1-terminal.
class PathCountTable {
 public:
  explicit PathCountTable(const Zdd& z) : counts_(z.node_count()) {
    // Children sit at higher indices, so a reverse sweep sees them first.
    for (std::size_t i = z.node_count(); i-- > 0;) {
      const auto& nd = z.nodes[i];
      counts_[i] = of(nd.lo) + of(nd.hi);
    }
    root_ = of(z.root);
    fits_u64_ = root_ <= std::numeric_limits<std::uint64_t>::max();
    if (fits_u64_) {
      small_.reserve(counts_.size());
      for (const auto& c : counts_) small_.push_back(static_cast<std::uint64_t>(c));
    }
  }

  BigCount of(NodeRef r) const {
    if (r == kFalse) return 0;
    if (r == kTrue) return 1;
    return counts_[node_index(r)];
  }
  std::uint64_t of_small(NodeRef r) const {
    if (r == kFalse) return 0;
    if (r == kTrue) return 1;
    return small_[node_index(r)];
  }
  const BigCount& root() const noexcept { return root_; }
  bool fits_u64() const noexcept { return fits_u64_; }

 private:
  std::vector<BigCount> counts_;
  std::vector<std::uint64_t> small_;
  BigCount root_;
  bool fits_u64_ = false;
};

inline BigCount count_partitions(const Zdd& z) { return PathCountTable(z).root(); }

// Builds the partition whose retained edges are the levels with taken[l] set.
class PlanDecoder {
 public:
  explicit PlanDecoder(const Zdd& z) : z_(z), parent_(z.vertex_count), label_(z.vertex_count) {}

  Partition decode(const std::vector<char>& taken) {
    std::vector<std::uint32_t> labels;
    decode_labels(taken, labels);
    return Partition::from_canonical(std::move(labels));
  }

  // Canonical 1-based labels into a reusable buffer; returns the district count.
  std::uint32_t decode_labels(const std::vector<char>& taken, std::vector<std::uint32_t>& labels) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
    for (std::size_t l = 0; l < taken.size(); ++l) {
      if (!taken[l]) continue;
      auto a = find(z_.level_edges[l].u), b = find(z_.level_edges[l].v);
      if (a != b) parent_[std::min(a, b)] = std::max(a, b);
    }
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    std::fill(label_.begin(), label_.end(), kUnset);
    labels.resize(z_.vertex_count);
    std::uint32_t next = 0;
    for (Vertex v = 0; v < z_.vertex_count; ++v) {
      auto r = find(v);
      if (label_[r] == kUnset) label_[r] = ++next;
      labels[v] = label_[r];
    }
    return next;
  }

  EdgeSetPlan edge_set(const std::vector<char>& taken) const {
    EdgeSetPlan es;
    for (std::size_t l = 0; l < taken.size(); ++l) {
      if (taken[l]) es.retained.push_back(z_.order[l]);
    }
    std::sort(es.retained.begin(), es.retained.end());
    return es;
  }

 private:
  Vertex find(Vertex v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  const Zdd& z_;
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> label_;
};

// Depth-first over live paths, 0-arc before 1-arc. `visit` receives the
// per-level take flags of each accepting path.
inline void for_each_path(const Zdd& z, const PathCountTable& counts,
                          const std::function<void(const std::vector<char>&)>& visit) {
  if (counts.root() == 0) return;
  std::vector<char> taken(z.levels(), 0);
  if (z.root == kTrue) {
    visit(taken);
    return;
  }
  struct Frame {
    NodeRef node;
    int next_arc;
  };
  std::vector<Frame> stack{{z.root, 0}};
  auto live = [&](NodeRef r) { return counts.fits_u64() ? counts.of_small(r) != 0 : counts.of(r) != 0; };
  while (!stack.empty()) {
    auto& fr = stack.back();
    if (fr.next_arc == 2) {
      stack.pop_back();
      continue;
    }
    const auto& nd = z.node(fr.node);
    const int arc = fr.next_arc++;
    const NodeRef child = arc == 0 ? nd.lo : nd.hi;
    if (!live(child)) continue;
    taken[nd.level - 1] = static_cast<char>(arc);
    if (child == kTrue) {
      // Levels skipped by an early arc into the 1-terminal are not taken.
      std::fill(taken.begin() + nd.level, taken.end(), 0);
      visit(taken);
    } else {
      stack.push_back({child, 0});
    }
  }
}

inline void enumerate(const Zdd& z, const PathCountTable& counts, const std::function<void(const Partition&)>& sink) {
  PlanDecoder dec(z);
  for_each_path(z, counts, [&](const std::vector<char>& taken) { sink(dec.decode(taken)); });
}

inline std::vector<Partition> enumerate_all(const Zdd& z) {
  PathCountTable counts(z);
  std::vector<Partition> out;
  enumerate(z, counts, [&](const Partition& pt) { out.push_back(pt); });
  return out;
}

// Draws one path; at each node the 1-arc is taken when a uniform integer in
// [0, c(lo) + c(hi)) is at least c(lo).
inline std::vector<char> sample_path(const Zdd& z, const PathCountTable& counts, Rng& rng) {
  std::vector<char> taken(z.levels(), 0);
  NodeRef cur = z.root;
  while (!is_terminal(cur)) {
    const auto& nd = z.node(cur);
    bool hi;
    if (counts.fits_u64()) {
      const auto lo = counts.of_small(nd.lo);
      hi = rng.below(lo + counts.of_small(nd.hi)) >= lo;
    } else {
      const auto lo = counts.of(nd.lo);
      hi = rng.below(BigCount(lo + counts.of(nd.hi))) >= lo;
    }
    taken[nd.level - 1] = hi ? 1 : 0;
    cur = hi ? nd.hi : nd.lo;
  }
  return taken;
}

// Draws are split into fixed-size blocks, each with its own derived stream,
// so output depends only on the seed, never on `workers`.
inline constexpr std::size_t kSampleBlock = 4096;

inline std::vector<Partition> sample_uniform(const Zdd& z, const PathCountTable& counts, std::uint64_t seed,
                                             std::size_t k, unsigned workers = 1) {
  if (counts.root() == 0) throw DataError("cannot sample: the diagram encodes no partitions");
  std::vector<Partition> out(k);
  const std::size_t blocks = (k + kSampleBlock - 1) / kSampleBlock;
  auto run_block = [&](std::size_t b) {
    Rng rng = Rng::stream(seed, b);
    PlanDecoder dec(z);
    const std::size_t end = std::min(k, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) out[i] = dec.decode(sample_path(z, counts, rng));
  };
  workers = std::max(1u, workers);
  if (workers == 1 || blocks <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) run_block(b);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

inline std::vector<Partition> sample_uniform(const Zdd& z, std::uint64_t seed, std::size_t k) {
  return sample_uniform(z, PathCountTable(z), seed, k);
}

}  // namespace partzdd
