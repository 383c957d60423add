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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unipan/normal.hpp"
#include "unipan/transform.hpp"

namespace unipan {

enum class SeriesKind : std::uint8_t { KDE, QQ };

/// Plot-ready point series for external tooling; no rendering here.
struct DiagnosticSeries {
  SeriesKind kind = SeriesKind::KDE;
  std::vector<std::pair<double, double>> points;
};

/// Gaussian-kernel density estimate evaluated on a grid:
/// (1/(n h)) * sum_i phi((g - x_i)/h).
inline DiagnosticSeries kde(std::span<const double> samples, double bandwidth,
                            std::span<const double> grid) {
  if (samples.empty()) {
    throw std::invalid_argument("kde: empty sample vector");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("kde: bandwidth must be positive");
  }
  if (grid.empty()) {
    throw std::invalid_argument("kde: empty grid");
  }
  DiagnosticSeries out;
  out.kind = SeriesKind::KDE;
  out.points.reserve(grid.size());
  const double scale =
      1.0 / (static_cast<double>(samples.size()) * bandwidth);
  for (double g : grid) {
    double density = 0.0;
    for (double x : samples) {
      density += normal_pdf((g - x) / bandwidth);
    }
    out.points.emplace_back(g, scale * density);
  }
  return out;
}

/// Silverman's rule of thumb, 1.06 * sd * n^(-1/5), with the sample
/// standard deviation (n - 1 denominator). Falls back to 1 for degenerate
/// inputs so the estimate stays defined.
inline double silverman_bandwidth(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("silverman_bandwidth: empty sample vector");
  }
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = (samples.size() > 1) ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (!(sd > 0.0)) return 1.0;
  return 1.06 * sd * std::pow(n, -0.2);
}

/// k quantile-quantile points (Q_a[i], Q_b[i]); identical inputs lie
/// exactly on y = x.
inline DiagnosticSeries qq_points(std::span<const double> a,
                                  std::span<const double> b, std::uint32_t k) {
  const auto qa = compute_quantiles(a, k);
  const auto qb = compute_quantiles(b, k);
  DiagnosticSeries out;
  out.kind = SeriesKind::QQ;
  out.points.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    out.points.emplace_back(qa[i], qb[i]);
  }
  return out;
}

}  // namespace unipan
