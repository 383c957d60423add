// Copyright 2026 The UniPAN Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "unipan/transform.hpp"

namespace unipan {

/// Cost of a 1D transport plan under c(x, z) = |x - z|^p, reported as the
/// p-th root of the mean p-th power displacement (so p = 1 is W1, p = 2 the
/// usual W2).
struct TransportCost {
  double value = 0.0;
  double exponent = 1.0;
};

namespace detail {

inline void require_transport_args(std::span<const double> a,
                                   std::span<const double> b, double p) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("transport: empty sample vector");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("transport: cost exponent p must be >= 1");
  }
}

inline double root_mean_power(double mean, double p) {
  return (p == 1.0) ? mean : std::pow(mean, 1.0 / p);
}

// Left-continuous empirical quantile at u: sorted[ceil(u*n) - 1]. The rank
// is evaluated in exact integer arithmetic for the midpoint grid
// u = (2k+1)/(2G) used below.
inline double quantile_at_midpoint(const std::vector<double>& sorted,
                                   std::uint64_t k, std::uint64_t grid) {
  const std::uint64_t n = sorted.size();
  const std::uint64_t num = n * (2 * k + 1);
  const std::uint64_t den = 2 * grid;
  std::uint64_t rank = (num + den - 1) / den;
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[static_cast<std::size_t>(rank - 1)];
}

}  // namespace detail

/// 1D Wasserstein-p distance. Equal-length inputs use the exact sorted
/// matching; unequal lengths compare the two empirical quantile functions
/// on a shared uniform grid of 4*max(|a|, |b|) midpoints.
inline TransportCost wasserstein_1d(std::span<const double> a,
                                    std::span<const double> b, double p) {
  detail::require_transport_args(a, b, p);
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  double mean = 0.0;
  if (sa.size() == sb.size()) {
    for (std::size_t i = 0; i < sa.size(); ++i) {
      mean += std::pow(std::fabs(sa[i] - sb[i]), p);
    }
    mean /= static_cast<double>(sa.size());
  } else {
    const std::uint64_t grid = 4 * std::max(sa.size(), sb.size());
    for (std::uint64_t k = 0; k < grid; ++k) {
      const double qa = detail::quantile_at_midpoint(sa, k, grid);
      const double qb = detail::quantile_at_midpoint(sb, k, grid);
      mean += std::pow(std::fabs(qa - qb), p);
    }
    mean /= static_cast<double>(grid);
  }
  return TransportCost{detail::root_mean_power(mean, p), p};
}

/// Mean cost of the plan induced by a fitted map: E |x - T(x)|^p over the
/// samples, reported in the same root convention as wasserstein_1d.
inline TransportCost map_transport_cost(std::span<const double> samples,
                                        const QuantileTransform& t, double p) {
  detail::require_transport_args(samples, samples, p);
  double mean = 0.0;
  for (double x : samples) {
    mean += std::pow(std::fabs(x - apply(t, x)), p);
  }
  mean /= static_cast<double>(samples.size());
  return TransportCost{detail::root_mean_power(mean, p), p};
}

/// Exhaustive assignment oracle; factorial time, capped at 6 points.
inline TransportCost brute_force_ot(std::span<const double> a,
                                    std::span<const double> b, double p) {
  detail::require_transport_args(a, b, p);
  if (a.size() != b.size()) {
    throw std::invalid_argument("brute_force_ot: lengths must match");
  }
  if (a.size() > 6) {
    throw std::invalid_argument("brute_force_ot: more than 6 points");
  }
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      mean += std::pow(std::fabs(a[i] - b[perm[i]]), p);
    }
    best = std::min(best, mean / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return TransportCost{detail::root_mean_power(best, p), p};
}

}  // namespace unipan
