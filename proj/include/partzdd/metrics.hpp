#pragma once

// Plan scores: population parity, proximity-based compactness (RPI),
// partisan dissimilarity, and the Gibbs energy used by the MCMC sampler.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/io.hpp"

namespace partzdd {

namespace detail {

inline void require_size(const Partition& pt, const VertexAttributes& a) {
  if (pt.vertex_count() != a.size()) throw DataError("plan and attribute table disagree on vertex count");
}

}  // namespace detail

inline std::vector<double> district_populations(const Partition& pt, const VertexAttributes& a) {
  detail::require_size(pt, a);
  std::vector<double> pop(pt.district_count(), 0.0);
  for (Vertex v = 0; v < pt.vertex_count(); ++v) pop[pt.district(v) - 1] += static_cast<double>(a.population[v]);
  return pop;
}

// Per-district |P_k - mean| / mean.
inline std::vector<double> parity_terms(std::span<const double> pop) {
  double total = 0;
  for (double x : pop) total += x;
  if (total <= 0) throw DataError("total population is zero");
  const double mean = total / static_cast<double>(pop.size());
  std::vector<double> out;
  out.reserve(pop.size());
  for (double x : pop) out.push_back(std::abs(x - mean) / mean);
  return out;
}

// max_k |P_k - mean| / mean. A zero-population district scores 1.
inline double parity_deviation(std::span<const double> pop) {
  auto t = parity_terms(pop);
  return *std::max_element(t.begin(), t.end());
}

inline double parity_deviation(const Partition& pt, const VertexAttributes& a) {
  return parity_deviation(district_populations(pt, a));
}

// Population-weighted squared distances over ordered pairs of one district.
inline double district_proximity_sum(std::span<const Vertex> members, const VertexAttributes& a) {
  if (!a.has_coordinates()) throw DataError("compactness requires x/y coordinates");
  const auto& x = *a.x;
  const auto& y = *a.y;
  long double sum = 0;
  for (Vertex i : members) {
    for (Vertex j : members) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      sum += static_cast<long double>(a.population[i]) * a.population[j] * (dx * dx + dy * dy);
    }
  }
  return static_cast<double>(sum);
}

inline std::vector<double> proximity_terms(const Partition& pt, const VertexAttributes& a) {
  detail::require_size(pt, a);
  std::vector<double> out;
  for (const auto& members : pt.districts()) out.push_back(district_proximity_sum(members, a));
  return out;
}

// Numerator of the RPI: sum of proximity terms over districts.
inline double proximity_score(const Partition& pt, const VertexAttributes& a) {
  double s = 0;
  for (double t : proximity_terms(pt, a)) s += t;
  return s;
}

// Smallest proximity score over a reference plan set (the RPI denominator).
inline double rpi_denominator(std::span<const Partition> reference, const VertexAttributes& a) {
  if (reference.empty()) throw DataError("empty reference plan set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : reference) best = std::min(best, proximity_score(pt, a));
  return best;
}

inline double rpi(const Partition& pt, const VertexAttributes& a, double denominator) {
  if (!(denominator > 0)) throw DataError("RPI denominator must be positive");
  return proximity_score(pt, a) / denominator;
}

// 1/2 * sum_k (P_k/P) |R_k - R| / (R(1-R)), shares weighted by population.
inline double dissimilarity(const Partition& pt, const VertexAttributes& a) {
  detail::require_size(pt, a);
  if (!a.rep_share) throw DataError("dissimilarity requires rep_share");
  const auto& r = *a.rep_share;
  std::vector<double> pop(pt.district_count(), 0.0), rep(pt.district_count(), 0.0);
  double total = 0, total_rep = 0;
  for (Vertex v = 0; v < pt.vertex_count(); ++v) {
    const double pv = static_cast<double>(a.population[v]);
    pop[pt.district(v) - 1] += pv;
    rep[pt.district(v) - 1] += pv * r[v];
    total += pv;
    total_rep += pv * r[v];
  }
  if (total <= 0) throw DataError("total population is zero");
  const double share = total_rep / total;
  if (!(share > 0 && share < 1)) throw DataError("statewide share must lie strictly between 0 and 1");
  double d = 0;
  for (std::size_t k = 0; k < pop.size(); ++k) {
    if (pop[k] <= 0) throw DataError("district " + std::to_string(k + 1) + " has zero population");
    d += (pop[k] / total) * std::abs(rep[k] / pop[k] - share);
  }
  return 0.5 * d / (share * (1 - share));
}

struct GibbsParams {
  double beta_parity = 0;
  double beta_compact = 0;
  std::optional<double> rpi_denominator;  // required when beta_compact > 0
};

// sum_k (beta_p * psi_k^p + beta_c * psi_k^c); target density is exp(-energy).
inline double gibbs_energy(std::span<const double> parity, std::span<const double> proximity, const GibbsParams& gp) {
  double e = 0;
  if (gp.beta_parity != 0) {
    for (double t : parity) e += gp.beta_parity * t;
  }
  if (gp.beta_compact != 0) {
    if (!gp.rpi_denominator || !(*gp.rpi_denominator > 0)) {
      throw DataError("compactness temperature set without a positive RPI denominator");
    }
    for (double t : proximity) e += gp.beta_compact * t / *gp.rpi_denominator;
  }
  return e;
}

inline double gibbs_energy(const Partition& pt, const VertexAttributes& a, const GibbsParams& gp) {
  if (gp.beta_parity < 0 || gp.beta_compact < 0) throw DataError("temperatures must be non-negative");
  std::vector<double> parity, proximity;
  if (gp.beta_parity != 0) parity = parity_terms(district_populations(pt, a));
  if (gp.beta_compact != 0) {
    if (!a.has_coordinates()) throw DataError("compactness temperature set without coordinates");
    proximity = proximity_terms(pt, a);
  }
  return gibbs_energy(parity, proximity, gp);
}

struct PlanScore {
  double parity_deviation = 0;
  std::optional<double> rpi;
  std::optional<double> dissimilarity;
  std::optional<double> energy;
  std::vector<double> district_population;
  std::vector<double> district_rep_share;
  bool has_empty_district = false;
};

// Scores what the attribute table allows; absent inputs leave fields empty.
inline PlanScore score_plan(const Partition& pt, const VertexAttributes& a, std::optional<double> denominator = {},
                            std::optional<GibbsParams> gibbs = {}) {
  PlanScore s;
  s.district_population = district_populations(pt, a);
  s.parity_deviation = parity_deviation(s.district_population);
  s.has_empty_district = std::any_of(s.district_population.begin(), s.district_population.end(),
                                     [](double x) { return x <= 0; });
  if (a.rep_share && !s.has_empty_district) {
    s.district_rep_share.assign(pt.district_count(), 0.0);
    for (Vertex v = 0; v < pt.vertex_count(); ++v) {
      s.district_rep_share[pt.district(v) - 1] += static_cast<double>(a.population[v]) * (*a.rep_share)[v];
    }
    for (std::size_t k = 0; k < pt.district_count(); ++k) s.district_rep_share[k] /= s.district_population[k];
    try {
      s.dissimilarity = dissimilarity(pt, a);
    } catch (const DataError&) {
    }
  }
  if (denominator && a.has_coordinates()) s.rpi = rpi(pt, a, *denominator);
  if (gibbs) s.energy = gibbs_energy(pt, a, *gibbs);
  return s;
}

}  // namespace partzdd
