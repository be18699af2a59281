#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "partzdd/error.hpp"

namespace partzdd {

// Potential scale reduction factor over equal-length chains.
inline double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw DataError("Gelman-Rubin needs at least two chains");
  const std::size_t n = chains.front().size();
  if (n < 2) throw DataError("Gelman-Rubin needs chains of length at least 2");
  for (const auto& c : chains) {
    if (c.size() != n) throw DataError("Gelman-Rubin chains must have equal length");
  }
  const double m = static_cast<double>(chains.size());
  const double len = static_cast<double>(n);
  std::vector<double> means;
  double within = 0;
  for (const auto& c : chains) {
    const double mu = std::accumulate(c.begin(), c.end(), 0.0) / len;
    double ss = 0;
    for (double x : c) ss += (x - mu) * (x - mu);
    within += ss / (len - 1);
    means.push_back(mu);
  }
  within /= m;
  if (!(within > 0)) throw DataError("Gelman-Rubin undefined for constant chains");
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double between = 0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= len / (m - 1);
  const double pooled = (len - 1) / len * within + between / len;
  return std::sqrt(pooled / within);
}

inline double autocorrelation(std::span<const double> x, std::size_t lag) {
  const std::size_t n = x.size();
  if (lag >= n) throw DataError("autocorrelation lag must be smaller than the series length");
  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double denom = 0, num = 0;
  for (double v : x) denom += (v - mu) * (v - mu);
  if (!(denom > 0)) throw DataError("autocorrelation undefined for a constant series");
  for (std::size_t t = 0; t + lag < n; ++t) num += (x[t] - mu) * (x[t + lag] - mu);
  return num / denom;
}

// Every k-th element starting with the first.
template <typename T>
std::vector<T> thin(std::span<const T> trace, std::size_t k) {
  if (k == 0) throw DataError("thinning interval must be at least 1");
  std::vector<T> out;
  for (std::size_t i = 0; i < trace.size(); i += k) out.push_back(trace[i]);
  return out;
}

template <typename T>
std::vector<T> thin(const std::vector<T>& trace, std::size_t k) {
  return thin(std::span<const T>(trace), k);
}

}  // namespace partzdd
