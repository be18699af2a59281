#pragma once

// Approximate samplers audited against exact enumeration: random seed-and-grow
// (RSG), a Gibbs-targeted single-vertex boundary-flip Metropolis chain, the
// post-hoc filter/reweight/resample step, and contiguous submap extraction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/io.hpp"
#include "partzdd/metrics.hpp"
#include "partzdd/random.hpp"

namespace partzdd {

enum class Provenance { rsg, mcmc, zdd_uniform, enumeration, resampled };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::rsg: return "rsg";
    case Provenance::mcmc: return "mcmc";
    case Provenance::zdd_uniform: return "zdd-uniform";
    case Provenance::enumeration: return "enumeration";
    case Provenance::resampled: return "resampled";
  }
  return "unknown";
}

struct PlanSample {
  std::vector<Partition> plans;
  std::optional<std::vector<double>> weights;
  Provenance provenance = Provenance::enumeration;
};

// Random connected vertex subset grown from a uniform seed vertex by drawing
// uniformly from the queue of neighbours of the chosen vertices. Sorted, 0-based.
inline std::vector<Vertex> sample_contiguous_submap(const Graph& g, std::size_t size, Rng& rng) {
  if (size == 0 || size > g.vertex_count()) throw DataError("submap size must be in [1, vertex count]");
  // The queue is a multiset: a vertex is queued once per chosen neighbour,
  // so candidates touching more of the submap are proportionally likelier.
  std::vector<char> chosen_flag(g.vertex_count(), 0);
  std::vector<Vertex> chosen, queue;
  auto take = [&](Vertex v) {
    chosen_flag[v] = 1;
    chosen.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (!chosen_flag[w]) queue.push_back(w);
    }
  };
  take(static_cast<Vertex>(rng.below(g.vertex_count())));
  while (chosen.size() < size) {
    if (queue.empty()) throw DataError("graph component smaller than requested submap size");
    const auto i = rng.below(queue.size());
    const Vertex v = queue[i];
    queue[i] = queue.back();
    queue.pop_back();
    if (!chosen_flag[v]) take(v);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

inline std::vector<Vertex> sample_contiguous_submap(const Graph& g, std::size_t size, std::uint64_t seed) {
  Rng rng(seed);
  return sample_contiguous_submap(g, size, rng);
}

// p distinct uniform seeds; then repeatedly a uniform unassigned vertex that
// touches some district joins a uniform choice among the districts it
// touches. Restarts when growth stalls with vertices left over.
inline Partition rsg_sample(const Graph& g, std::size_t p, Rng& rng, std::size_t max_restarts = 100) {
  const std::size_t n = g.vertex_count();
  if (p == 0 || p > n) throw DataError("rsg: number of districts must be in [1, vertex count]");
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(n);
  std::vector<Vertex> candidates;
  std::vector<std::size_t> cand_pos(n);
  std::vector<std::uint32_t> touching;
  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    std::fill(label.begin(), label.end(), kNone);
    std::fill(cand_pos.begin(), cand_pos.end(), kNone);
    candidates.clear();
    auto assign = [&](Vertex v, std::uint32_t d) {
      label[v] = d;
      if (cand_pos[v] != kNone) {
        const auto i = cand_pos[v];
        cand_pos[candidates.back()] = i;
        candidates[i] = candidates.back();
        candidates.pop_back();
        cand_pos[v] = kNone;
      }
      for (Vertex w : g.neighbors(v)) {
        if (label[w] == kNone && cand_pos[w] == kNone) {
          cand_pos[w] = candidates.size();
          candidates.push_back(w);
        }
      }
    };
    // Partial Fisher-Yates for seeds without replacement.
    std::vector<Vertex> pool(n);
    std::iota(pool.begin(), pool.end(), Vertex{0});
    for (std::uint32_t d = 0; d < p; ++d) {
      const auto j = d + rng.below(n - d);
      std::swap(pool[d], pool[j]);
      assign(pool[d], d);
    }
    std::size_t assigned = p;
    while (assigned < n && !candidates.empty()) {
      const Vertex v = candidates[rng.below(candidates.size())];
      touching.clear();
      for (Vertex w : g.neighbors(v)) {
        if (label[w] != kNone && std::find(touching.begin(), touching.end(), label[w]) == touching.end()) {
          touching.push_back(label[w]);
        }
      }
      std::sort(touching.begin(), touching.end());
      assign(v, touching[rng.below(touching.size())]);
      ++assigned;
    }
    if (assigned == n) return Partition::from_labels(label);
  }
  throw DataError("rsg: no valid plan after " + std::to_string(max_restarts) + " restarts");
}

inline PlanSample rsg_draws(const Graph& g, std::size_t p, std::uint64_t seed, std::size_t count,
                            std::size_t max_restarts = 100) {
  PlanSample s;
  s.provenance = Provenance::rsg;
  Rng rng(seed);
  s.plans.reserve(count);
  for (std::size_t i = 0; i < count; ++i) s.plans.push_back(rsg_sample(g, p, rng, max_restarts));
  return s;
}

struct ChainConfig {
  std::size_t iterations = 1000;
  std::size_t chain_count = 1;
  std::uint64_t seed = 1;
  GibbsParams gibbs;
  std::size_t thinning = 1;
  std::size_t burn_in = 0;
  double parity_threshold = std::numeric_limits<double>::infinity();
  std::optional<double> rpi_threshold;

  void validate() const {
    if (iterations < 1) throw DataError("iterations must be at least 1");
    if (thinning < 1) throw DataError("thinning must be at least 1");
    if (chain_count < 1) throw DataError("chain count must be at least 1");
    if (!(parity_threshold >= 0)) throw DataError("parity threshold must be non-negative");
    if (gibbs.beta_parity < 0 || gibbs.beta_compact < 0) throw DataError("temperatures must be non-negative");
  }
};

struct ChainRecord {
  std::size_t iteration;  // 1-based, counts every proposal
  double energy;
  double parity;
  bool accepted;
};

struct ChainTrace {
  std::vector<Partition> plans;
  std::vector<ChainRecord> records;  // aligned with plans
  std::size_t accepted = 0;
};

namespace detail {

// Mutable chain state with cached district populations and proximity sums.
class FlipChain {
 public:
  FlipChain(const Graph& g, const VertexAttributes& a, const Partition& start, const GibbsParams& gp)
      : g_(g), a_(a), gp_(gp), label_(start.vertex_count()), size_(start.district_count(), 0),
        pop_(start.district_count(), 0.0) {
    for (Vertex v = 0; v < label_.size(); ++v) {
      label_[v] = start.district(v) - 1;
      ++size_[label_[v]];
      pop_[label_[v]] += static_cast<double>(a.population[v]);
    }
    if (gp.beta_compact != 0) {
      if (!a.has_coordinates()) throw DataError("compactness temperature set without coordinates");
      prox_ = proximity_terms(start, a);
    }
    energy_ = energy_of(pop_, prox_);
    seen_.assign(label_.size(), 0);
    pairs_ = count_pairs();
  }

  double energy() const { return energy_; }
  double parity() const { return parity_deviation(pop_); }
  Partition partition() const { return Partition::from_labels(label_); }

  // One Metropolis-Hastings proposal; returns whether it was accepted.
  bool step(Rng& rng) {
    const auto [v, to] = pick_pair(rng.below(pairs_));
    const auto from = label_[v];
    if (size_[from] == 1 || !donor_stays_connected(v, from)) return false;

    const double pv = static_cast<double>(a_.population[v]);
    auto new_pop = pop_;
    new_pop[from] -= pv;
    new_pop[to] += pv;
    auto new_prox = prox_;
    if (!prox_.empty()) {
      new_prox[from] -= 2 * cross_proximity(v, from);
      new_prox[to] += 2 * cross_proximity(v, to);
    }
    const double new_energy = energy_of(new_pop, new_prox);

    label_[v] = to;
    const std::size_t new_pairs = count_pairs();
    const double log_ratio = (energy_ - new_energy) + std::log(static_cast<double>(pairs_)) -
                             std::log(static_cast<double>(new_pairs));
    if (log_ratio >= 0 || rng.uniform() < std::exp(log_ratio)) {
      --size_[from];
      ++size_[to];
      pop_ = std::move(new_pop);
      prox_ = std::move(new_prox);
      energy_ = new_energy;
      pairs_ = new_pairs;
      return true;
    }
    label_[v] = from;
    return false;
  }

 private:
  double energy_of(const std::vector<double>& pop, const std::vector<double>& prox) const {
    std::vector<double> parity;
    if (gp_.beta_parity != 0) parity = parity_terms(pop);
    return gibbs_energy(parity, prox, gp_);
  }

  double cross_proximity(Vertex v, std::uint32_t d) const {
    const auto& x = *a_.x;
    const auto& y = *a_.y;
    long double s = 0;
    for (Vertex j = 0; j < label_.size(); ++j) {
      if (j == v || label_[j] != d) continue;
      const double dx = x[v] - x[j], dy = y[v] - y[j];
      s += static_cast<long double>(a_.population[v]) * a_.population[j] * (dx * dx + dy * dy);
    }
    return static_cast<double>(s);
  }

  // Number of (vertex, neighbouring foreign district) pairs.
  std::size_t count_pairs() {
    std::size_t total = 0;
    for (Vertex v = 0; v < label_.size(); ++v) total += foreign_districts(v);
    return total;
  }

  std::size_t foreign_districts(Vertex v) {
    scratch_.clear();
    for (Vertex w : g_.neighbors(v)) {
      const auto d = label_[w];
      if (d != label_[v] && std::find(scratch_.begin(), scratch_.end(), d) == scratch_.end()) scratch_.push_back(d);
    }
    return scratch_.size();
  }

  std::pair<Vertex, std::uint32_t> pick_pair(std::size_t index) {
    for (Vertex v = 0; v < label_.size(); ++v) {
      const auto k = foreign_districts(v);
      if (index < k) {
        std::sort(scratch_.begin(), scratch_.end());
        return {v, scratch_[index]};
      }
      index -= k;
    }
    throw std::logic_error("boundary pair index out of range");
  }

  bool donor_stays_connected(Vertex v, std::uint32_t d) {
    ++stamp_;
    Vertex start = v;
    for (Vertex w : g_.neighbors(v)) {
      if (label_[w] == d) {
        start = w;
        break;
      }
    }
    if (start == v) return false;
    stack_.assign(1, start);
    seen_[start] = stamp_;
    seen_[v] = stamp_;
    std::size_t reached = 1;
    while (!stack_.empty()) {
      Vertex x = stack_.back();
      stack_.pop_back();
      for (Vertex w : g_.neighbors(x)) {
        if (label_[w] == d && seen_[w] != stamp_) {
          seen_[w] = stamp_;
          ++reached;
          stack_.push_back(w);
        }
      }
    }
    return reached == size_[d] - 1;
  }

  const Graph& g_;
  const VertexAttributes& a_;
  GibbsParams gp_;
  std::vector<std::uint32_t> label_;
  std::vector<std::size_t> size_;
  std::vector<double> pop_;
  std::vector<double> prox_;
  double energy_ = 0;
  std::size_t pairs_ = 0;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
  std::vector<Vertex> stack_;
};

}  // namespace detail

// Metropolis-Hastings chain targeting exp(-gibbs_energy) over connected
// p-partitions. Proposal: a uniform (boundary vertex, adjacent foreign
// district) pair; moves that empty or disconnect the donor are rejected.
// Records the state after iteration t when t > burn_in and
// (t - burn_in - 1) is a multiple of the thinning interval.
inline ChainTrace mcmc_chain(const Graph& g, const VertexAttributes& a, std::size_t p, const ChainConfig& cfg,
                             const Partition& start, Rng& rng) {
  cfg.validate();
  check_partition(g, start, p);
  if (a.size() != g.vertex_count()) throw DataError("attribute table does not match graph");
  detail::FlipChain chain(g, a, start, cfg.gibbs);
  ChainTrace trace;
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const bool acc = p > 1 && chain.step(rng);
    trace.accepted += acc;
    if (t > cfg.burn_in && (t - cfg.burn_in - 1) % cfg.thinning == 0) {
      trace.plans.push_back(chain.partition());
      trace.records.push_back({t, chain.energy(), chain.parity(), acc});
    }
  }
  return trace;
}

inline ChainTrace mcmc_chain(const Graph& g, const VertexAttributes& a, std::size_t p, const ChainConfig& cfg,
                             const Partition& start) {
  Rng rng(cfg.seed);
  return mcmc_chain(g, a, p, cfg, start, rng);
}

// cfg.chain_count independent chains, each on its own stream of cfg.seed and
// started from an RSG draw on that stream. Output is independent of `workers`.
inline std::vector<ChainTrace> mcmc_chains(const Graph& g, const VertexAttributes& a, std::size_t p,
                                           const ChainConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  std::vector<ChainTrace> out(cfg.chain_count);
  auto run = [&](std::size_t c) {
    Rng rng = Rng::stream(cfg.seed, c);
    const Partition start = rsg_sample(g, p, rng);
    out[c] = mcmc_chain(g, a, p, cfg, start, rng);
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t c = 0; c < cfg.chain_count; ++c) run(c);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < cfg.chain_count; c += workers) run(c);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

struct ResampleConfig {
  double parity_threshold = std::numeric_limits<double>::infinity();
  std::optional<double> rpi_threshold;
  GibbsParams gibbs;  // the target the input was drawn from
  std::uint64_t seed = 1;
  std::size_t out_size = 0;
};

// Drops plans outside the parity/compactness constraints, weights survivors
// by the inverse Gibbs density exp(+energy) (times any input weight) and
// resamples out_size plans with replacement (0 = survivor count). With equal
// weights and out_size no larger than the survivor count, the result is a
// uniform subset of the survivors instead, or all of them.
inline PlanSample filter_reweight_resample(const PlanSample& s, const VertexAttributes& a, const ResampleConfig& rc) {
  if (rc.rpi_threshold && !rc.gibbs.rpi_denominator) throw DataError("RPI threshold requires an RPI denominator");
  std::vector<std::size_t> keep;
  std::vector<double> log_w;
  for (std::size_t i = 0; i < s.plans.size(); ++i) {
    const auto& pt = s.plans[i];
    if (parity_deviation(pt, a) > rc.parity_threshold) continue;
    if (rc.rpi_threshold && rpi(pt, a, *rc.gibbs.rpi_denominator) > *rc.rpi_threshold) continue;
    double lw = gibbs_energy(pt, a, rc.gibbs);
    if (s.weights) {
      const double w = (*s.weights)[i];
      if (!(w >= 0) || !std::isfinite(w)) throw DataError("sample weights must be finite and non-negative");
      if (w == 0) continue;
      lw += std::log(w);
    }
    keep.push_back(i);
    log_w.push_back(lw);
  }
  if (keep.empty()) throw DataError("no sampled plan satisfies the constraints");
  PlanSample out;
  out.provenance = Provenance::resampled;
  // Equal weights: the survivors already follow the target, and a bootstrap
  // of them would only add duplicate draws.
  const bool flat = std::all_of(log_w.begin(), log_w.end(), [&](double w) { return w == log_w.front(); });
  if (flat && rc.out_size <= keep.size()) {
    if (rc.out_size != 0 && rc.out_size < keep.size()) {
      // Uniform subsample without replacement, kept in input order.
      Rng rng(rc.seed);
      for (std::size_t k = 0; k < rc.out_size; ++k) std::swap(keep[k], keep[k + rng.below(keep.size() - k)]);
      keep.resize(rc.out_size);
      std::sort(keep.begin(), keep.end());
    }
    for (auto i : keep) out.plans.push_back(s.plans[i]);
    return out;
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> cum(keep.size());
  double acc = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    acc += std::exp(log_w[i] - top);
    cum[i] = acc;
  }
  const std::size_t n = rc.out_size ? rc.out_size : keep.size();
  out.plans.reserve(n);
  Rng rng(rc.seed);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * acc;
    auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    out.plans.push_back(s.plans[keep[std::min(idx, keep.size() - 1)]]);
  }
  return out;
}

}  // namespace partzdd
