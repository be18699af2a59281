#pragma once

// Statistical checks of sampler output against exact ground truth, and the
// many-submaps study that runs them over random contiguous submaps.

#include <algorithm>
#include <array>
#include <exception>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "partzdd/edge_order.hpp"
#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/io.hpp"
#include "partzdd/metrics.hpp"
#include "partzdd/random.hpp"
#include "partzdd/samplers.hpp"
#include "partzdd/zdd_builder.hpp"
#include "partzdd/zdd_query.hpp"

namespace partzdd {

struct KsResult {
  double statistic = 0;
  double p_value = 1;
  std::size_t n = 0;
  std::size_t m = 0;
};

// Asymptotic upper tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0, sign = 1;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Two-sided two-sample test. The statistic compares right-continuous ECDFs,
// so ties are resolved by consuming every copy of a value at once. The
// p-value uses the effective size nm/(n+m) with Stephens' small-sample
// adjustment; it is approximate below about 50 observations per side.
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("KS test needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  r.n = x.size();
  r.m = y.size();
  const double ne = n * m / (n + m);
  const double sq = std::sqrt(ne);
  r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

inline KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  return ks_two_sample(std::span<const double>(a), std::span<const double>(b));
}

// A sample against a fully known reference population (for instance every
// enumerated plan). The statistic is the two-sample one, but the reference
// ECDF carries no sampling noise, so the p-value uses the sample size alone.
inline KsResult ks_against_reference(std::span<const double> sample, std::span<const double> reference) {
  KsResult r = ks_two_sample(sample, reference);
  const double sq = std::sqrt(static_cast<double>(r.n));
  r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * r.statistic);
  return r;
}

inline KsResult ks_against_reference(const std::vector<double>& sample, const std::vector<double>& reference) {
  return ks_against_reference(std::span<const double>(sample), std::span<const double>(reference));
}

// sup |ECDF - x| of a sample from [0,1] against the uniform distribution.
inline double ks_uniform_distance(std::span<const double> values) {
  if (values.empty()) throw DataError("empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    d = std::max({d, static_cast<double>(i + 1) / n - s[i], s[i] - static_cast<double>(i) / n});
  }
  return d;
}

struct ParityHistogram {
  static constexpr std::size_t kBins = 20;
  static constexpr double kWidth = 0.01;
  std::array<std::size_t, kBins> counts{};
  std::size_t overflow = 0;

  void add(double deviation) {
    // Tolerance keeps values such as 0.07 out of the bin below.
    const auto bin = static_cast<std::size_t>(std::floor(deviation / kWidth + 1e-9));
    if (bin >= kBins) ++overflow;
    else ++counts[bin];
  }
  std::size_t total() const {
    std::size_t t = overflow;
    for (auto c : counts) t += c;
    return t;
  }
  // Plans in bins [0, 0.01) .. [k/100 - 0.01, k/100).
  std::size_t cumulative(std::size_t bins) const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < std::min(bins, kBins); ++i) t += counts[i];
    return t;
  }
};

inline ParityHistogram parity_histogram(std::span<const Partition> plans, const VertexAttributes& a) {
  ParityHistogram h;
  for (const auto& pt : plans) h.add(parity_deviation(pt, a));
  return h;
}

struct QqPoint {
  double expected;
  double observed;
};

// Sorted p-values against uniform quantiles i/(n+1).
inline std::vector<QqPoint> qq_uniform(std::span<const double> p_values) {
  if (p_values.empty()) throw DataError("QQ data needs at least one p-value");
  std::vector<double> s(p_values.begin(), p_values.end());
  for (double v : s) {
    if (!(v >= 0 && v <= 1)) throw DataError("p-values must lie in [0,1]");
  }
  std::sort(s.begin(), s.end());
  std::vector<QqPoint> out;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({static_cast<double>(i + 1) / (n + 1), s[i]});
  return out;
}

inline double qq_max_deviation(std::span<const QqPoint> qq) {
  double d = 0;
  for (const auto& q : qq) d = std::max(d, std::abs(q.observed - q.expected));
  return d;
}

struct ChiSquareResult {
  double statistic = 0;
  double p_value = 1;
  std::size_t degrees_of_freedom = 0;
};

// Pearson goodness of fit against equal cell probabilities.
inline ChiSquareResult chi_square_uniformity(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw DataError("chi-square test needs at least two categories");
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  if (expected < 5) throw DataError("chi-square test needs an expected count of at least 5 per category");
  ChiSquareResult r;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    r.statistic += diff * diff / expected;
  }
  r.degrees_of_freedom = counts.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(r.degrees_of_freedom));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

inline ChiSquareResult chi_square_uniformity(const std::vector<std::uint64_t>& counts) {
  return chi_square_uniformity(std::span<const std::uint64_t>(counts));
}

// ---------------------------------------------------------------------------
// Many-submaps study.

enum class SamplerKind { zdd_uniform, rsg, mcmc, fixed };

inline const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::zdd_uniform: return "zdd-uniform";
    case SamplerKind::rsg: return "rsg";
    case SamplerKind::mcmc: return "mcmc";
    case SamplerKind::fixed: return "fixed";
  }
  return "unknown";
}

struct SamplerSpec {
  SamplerKind kind = SamplerKind::zdd_uniform;
  std::string name;  // label in output tables; defaults to the kind
  std::size_t draws = 1000;
  // MCMC only: retained draws are taken every `thinning` iterations, and
  // beta_parity[i] applies at parity level i (missing entries mean 0).
  std::size_t thinning = 500;
  std::vector<double> beta_parity;

  std::string label() const { return name.empty() ? to_string(kind) : name; }
};

struct StudyConfig {
  std::size_t submap_size = 25;
  std::size_t map_count = 200;
  std::size_t districts = 2;
  std::vector<double> parity_levels{std::numeric_limits<double>::infinity()};
  std::vector<SamplerSpec> samplers;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

enum class StudyStatus { ok, no_truth, no_sample };

inline const char* to_string(StudyStatus s) {
  switch (s) {
    case StudyStatus::ok: return "ok";
    case StudyStatus::no_truth: return "no_valid_plans";
    case StudyStatus::no_sample: return "no_sampled_plans";
  }
  return "unknown";
}

struct StudyRow {
  std::size_t map_id;
  double parity_level;
  std::string sampler;
  StudyStatus status = StudyStatus::ok;
  double ks_statistic = std::numeric_limits<double>::quiet_NaN();
  double ks_p = std::numeric_limits<double>::quiet_NaN();
  std::size_t truth_size = 0;
  std::size_t sample_size = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;

  // p-values of one sampler at one parity level, skipped maps excluded.
  std::vector<double> p_values(const std::string& sampler, double parity_level) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.sampler == sampler && r.parity_level == parity_level && r.status == StudyStatus::ok) out.push_back(r.ks_p);
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  return splitmix64(splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b) ^ c);
}

// Parity deviation and dissimilarity of a labeled plan in one pass, with the
// same arithmetic as parity_deviation() and dissimilarity().
class LabelScorer {
 public:
  explicit LabelScorer(const VertexAttributes& a) : a_(a) {
    if (!a.rep_share) throw DataError("dissimilarity requires rep_share");
  }

  std::pair<double, double> operator()(const std::vector<std::uint32_t>& labels, std::uint32_t districts) {
    pop_.assign(districts, 0.0);
    rep_.assign(districts, 0.0);
    const auto& r = *a_.rep_share;
    double total = 0, total_rep = 0;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      const double pv = static_cast<double>(a_.population[v]);
      pop_[labels[v] - 1] += pv;
      rep_[labels[v] - 1] += pv * r[v];
      total += pv;
      total_rep += pv * r[v];
    }
    const double parity = parity_deviation(pop_);
    const double share = total_rep / total;
    if (!(share > 0 && share < 1)) throw DataError("statewide share must lie strictly between 0 and 1");
    double d = 0;
    for (std::size_t k = 0; k < pop_.size(); ++k) {
      if (pop_[k] <= 0) throw DataError("district " + std::to_string(k + 1) + " has zero population");
      d += (pop_[k] / total) * std::abs(rep_[k] / pop_[k] - share);
    }
    return {parity, 0.5 * d / (share * (1 - share))};
  }

 private:
  const VertexAttributes& a_;
  std::vector<double> pop_, rep_;
};

inline std::vector<StudyRow> run_one_submap(const Graph& base, const VertexAttributes& attrs, const StudyConfig& cfg,
                                            std::size_t map_id) {
  Rng map_rng = Rng::stream(cfg.seed, map_id);
  auto sub = induced_subgraph(base, sample_contiguous_submap(base, cfg.submap_size, map_rng));
  const Graph& g = sub.graph;
  const VertexAttributes a = attrs.subset(sub.original);

  const Zdd z = build_zdd(g, order_edges(g), cfg.districts);
  const PathCountTable counts(z);
  std::vector<double> truth_parity, truth_dissim;
  std::optional<Partition> first_plan;
  {
    PlanDecoder dec(z);
    LabelScorer score(a);
    std::vector<std::uint32_t> labels;
    for_each_path(z, counts, [&](const std::vector<char>& taken) {
      const auto k = dec.decode_labels(taken, labels);
      if (!first_plan) first_plan = Partition::from_canonical(labels);
      const auto [parity, dissim] = score(labels, k);
      truth_parity.push_back(parity);
      truth_dissim.push_back(dissim);
    });
  }

  std::vector<StudyRow> rows;
  for (std::size_t si = 0; si < cfg.samplers.size(); ++si) {
    const auto& spec = cfg.samplers[si];
    // Unconstrained draws are shared across parity levels except for MCMC,
    // whose target temperature depends on the level.
    std::optional<PlanSample> shared;
    auto level_sample = [&](std::size_t li) -> PlanSample {
      const std::uint64_t s = derive_seed(cfg.seed, map_id, si, spec.kind == SamplerKind::mcmc ? li : 0);
      switch (spec.kind) {
        case SamplerKind::zdd_uniform: {
          if (!shared) shared = PlanSample{sample_uniform(z, counts, s, spec.draws), {}, Provenance::zdd_uniform};
          return *shared;
        }
        case SamplerKind::rsg: {
          if (!shared) shared = rsg_draws(g, cfg.districts, s, spec.draws);
          return *shared;
        }
        case SamplerKind::fixed: {
          if (!shared) shared = PlanSample{std::vector<Partition>(spec.draws, *first_plan), {}, Provenance::enumeration};
          return *shared;
        }
        case SamplerKind::mcmc: {
          ChainConfig cc;
          cc.iterations = spec.draws * spec.thinning;
          cc.thinning = spec.thinning;
          cc.seed = s;
          cc.gibbs.beta_parity = li < spec.beta_parity.size() ? spec.beta_parity[li] : 0.0;
          Rng rng(s);
          const Partition start = rsg_sample(g, cfg.districts, rng);
          auto trace = mcmc_chain(g, a, cfg.districts, cc, start, rng);
          return PlanSample{std::move(trace.plans), {}, Provenance::mcmc};
        }
      }
      return {};
    };

    for (std::size_t li = 0; li < cfg.parity_levels.size(); ++li) {
      const double level = cfg.parity_levels[li];
      StudyRow row{map_id, level, spec.label()};
      std::vector<double> truth;
      for (std::size_t k = 0; k < truth_parity.size(); ++k) {
        if (truth_parity[k] <= level) truth.push_back(truth_dissim[k]);
      }
      row.truth_size = truth.size();
      if (truth.empty()) {
        row.status = StudyStatus::no_truth;
        rows.push_back(row);
        continue;
      }
      PlanSample drawn = level_sample(li);
      ResampleConfig rc;
      rc.parity_threshold = level;
      if (spec.kind == SamplerKind::mcmc) {
        rc.gibbs.beta_parity = li < spec.beta_parity.size() ? spec.beta_parity[li] : 0.0;
      }
      rc.seed = derive_seed(cfg.seed, map_id, si, 1000 + li);
      std::vector<double> observed;
      try {
        // out_size 0 keeps the survivor count.
        auto resampled = filter_reweight_resample(drawn, a, rc);
        for (const auto& pt : resampled.plans) observed.push_back(dissimilarity(pt, a));
      } catch (const DataError&) {
        row.status = StudyStatus::no_sample;
        rows.push_back(row);
        continue;
      }
      const auto ks = ks_against_reference(observed, truth);
      row.sample_size = observed.size();
      row.ks_statistic = ks.statistic;
      row.ks_p = ks.p_value;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace detail

// For each of cfg.map_count random contiguous submaps: enumerate every plan,
// run each sampler, apply the parity filter (and inverse-Gibbs reweighting
// for MCMC), and KS-test the dissimilarity distribution against the truth.
// Temperatures are fixed per parity level across all maps.
inline StudyResult run_submap_study(const Graph& base, const VertexAttributes& attrs, const StudyConfig& cfg) {
  if (!attrs.rep_share) throw DataError("submap study needs rep_share attributes");
  if (attrs.size() != base.vertex_count()) throw DataError("attribute table does not match graph");
  std::vector<std::vector<StudyRow>> per_map(cfg.map_count);
  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.map_count; ++i) per_map[i] = detail::run_one_submap(base, attrs, cfg, i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < cfg.map_count; i += workers) {
            per_map[i] = detail::run_one_submap(base, attrs, cfg, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  StudyResult r;
  for (auto& rows : per_map) r.rows.insert(r.rows.end(), rows.begin(), rows.end());
  return r;
}

}  // namespace partzdd
