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
#include <span>
#include <stdexcept>
#include <vector>

#include "unipan/normal.hpp"
#include "unipan/raster.hpp"

namespace unipan {

enum class TargetKind : std::uint8_t { StandardNormal, StandardUniform };

/// The distribution every band is mapped onto. The uniform inverse CDF is
/// the identity on [0, 1]; the normal one is evaluated on u clamped to
/// [epsilon, 1 - epsilon] so transformed pixels stay finite.
struct TargetDistribution {
  TargetKind kind = TargetKind::StandardUniform;
  double epsilon = 1e-7;

  static TargetDistribution uniform() {
    return TargetDistribution{TargetKind::StandardUniform, 1e-7};
  }
  static TargetDistribution normal(double eps = 1e-7) {
    TargetDistribution t{TargetKind::StandardNormal, eps};
    t.check();
    return t;
  }

  void check() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
      throw std::invalid_argument(
          "TargetDistribution: epsilon must lie in (0, 0.5)");
    }
  }

  double inverse_cdf(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw std::invalid_argument("inverse_cdf: u outside [0, 1]");
    }
    if (kind == TargetKind::StandardUniform) return u;
    check();
    return normal_quantile(std::clamp(u, epsilon, 1.0 - epsilon));
  }
};

inline double inverse_cdf(const TargetDistribution& target, double u) {
  return target.inverse_cdf(u);
}

/// Empirical quantiles q_i = inf{x in X : P(X <= x) >= i/(m-1)}. Ranks are
/// resolved in integer arithmetic, so results are exact and the vector is
/// non-decreasing with q_0 = min(X) and q_{m-1} = max(X). m may exceed the
/// number of distinct samples; the output then contains repeats.
inline std::vector<double> compute_quantiles(std::span<const double> samples,
                                             std::uint32_t m) {
  if (samples.empty()) {
    throw std::invalid_argument("compute_quantiles: empty sample vector");
  }
  if (m < 2) {
    throw std::invalid_argument("compute_quantiles: m must be >= 2");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("compute_quantiles: non-finite sample");
    }
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t n = sorted.size();
  const std::uint64_t den = m - 1;
  std::vector<double> q(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    // smallest rank r with r/n >= i/(m-1), i.e. r = ceil(i*n/(m-1)).
    std::uint64_t rank = (static_cast<std::uint64_t>(i) * n + den - 1) / den;
    if (rank < 1) rank = 1;
    q[i] = sorted[static_cast<std::size_t>(rank - 1)];
  }
  return q;
}

namespace detail {

// interp (and its reversed twin) run on lightweight index views so the
// uniform reference grid U = {0, 1/(m-1), ..., 1} is recomputed on the fly,
// never materialized or stored.
struct SpanView {
  std::span<const double> v;
  double operator[](std::size_t i) const { return v[i]; }
};

struct NegRevView {
  std::span<const double> v;
  double operator[](std::size_t i) const { return -v[v.size() - 1 - i]; }
};

struct LinspaceView {
  std::size_t m;
  double operator[](std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(m - 1);
  }
};

struct NegRevLinspaceView {
  std::size_t m;
  double operator[](std::size_t i) const {
    return -(static_cast<double>(m - 1 - i) / static_cast<double>(m - 1));
  }
};

// Piecewise-linear Q -> U lookup. Boundary cases follow the half-open
// segment condition Q[i] < x <= Q[i+1]; x landing exactly on a knot returns
// the knot's U value, which keeps grid points exact and skips zero-width
// plateau segments without ever dividing by zero.
template <class QV, class UV>
double interp_impl(double x, const QV& q, const UV& u, std::size_t m) {
  if (x <= q[0]) return u[0];
  if (x > q[m - 1]) return u[m - 1];
  // first index k with q[k] >= x; 1 <= k <= m-1 here
  std::size_t lo = 0, hi = m - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (q[mid] < x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const std::size_t k = lo;
  if (x == q[k]) return u[k];
  const double span_q = q[k] - q[k - 1];
  return u[k - 1] + (x - q[k - 1]) / span_q * (u[k] - u[k - 1]);
}

}  // namespace detail

/// Linear interpolation of x through knots (Q, U). Outside [Q[0], Q[m-1]]
/// the end values saturate; segments with Q[i] = Q[i+1] are skipped.
inline double interp(double x, std::span<const double> q,
                     std::span<const double> u) {
  if (q.size() != u.size()) {
    throw std::invalid_argument("interp: Q and U length mismatch");
  }
  if (q.size() < 2) {
    throw std::invalid_argument("interp: need at least two knots");
  }
  return detail::interp_impl(x, detail::SpanView{q}, detail::SpanView{u},
                             q.size());
}

/// One fitted per-band quantile map plus the shared target distribution.
struct QuantileTransform {
  std::vector<double> quantiles;  // non-decreasing, size >= 2
  TargetDistribution target;
  std::uint32_t band_index = 0;

  std::uint32_t m() const {
    return static_cast<std::uint32_t>(quantiles.size());
  }
};

/// Robust eCDF value u(x) = u_up(x)/2 + u_down(x)/2. The backward pass
/// interpolates on the negated, reversed axes, which agrees with the
/// forward pass on strictly increasing quantiles and resolves plateaus to
/// their midpoint.
inline double ecdf_value(double x, const QuantileTransform& t) {
  const std::size_t m = t.quantiles.size();
  const std::span<const double> q(t.quantiles);
  const double fwd =
      detail::interp_impl(x, detail::SpanView{q}, detail::LinspaceView{m}, m);
  const double bwd = -detail::interp_impl(-x, detail::NegRevView{q},
                                          detail::NegRevLinspaceView{m}, m);
  return std::clamp(fwd / 2.0 + bwd / 2.0, 0.0, 1.0);
}

inline QuantileTransform fit_band(std::span<const double> samples,
                                  std::uint32_t m, TargetDistribution target,
                                  std::uint32_t band_index = 0) {
  return QuantileTransform{compute_quantiles(samples, m), target, band_index};
}

/// The fitted transform T(x) = F_T^{-1}(u(x)). Monotone non-decreasing.
inline double apply(const QuantileTransform& t, double x) {
  return t.target.inverse_cdf(ecdf_value(x, t));
}

inline std::vector<double> apply(const QuantileTransform& t,
                                 std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = apply(t, xs[i]);
  return out;
}

/// One QuantileTransform per band plus the sampling metadata needed to
/// reproduce the fit. Immutable after construction; safe to share.
struct TransformSet {
  std::vector<QuantileTransform> transforms;
  std::uint32_t m = 0;
  std::uint64_t n_sampled = 0;
  std::uint64_t seed = 0;
  TargetDistribution target;

  std::uint32_t band_count() const {
    return static_cast<std::uint32_t>(transforms.size());
  }

  void check() const {
    if (transforms.empty()) {
      throw std::invalid_argument("TransformSet: no bands");
    }
    for (const auto& t : transforms) {
      if (t.m() != m || t.target.kind != target.kind ||
          t.target.epsilon != target.epsilon) {
        throw std::invalid_argument(
            "TransformSet: members disagree on m or target");
      }
    }
  }
};

/// Element-wise per-band application; spatial arrangement untouched.
inline Raster apply_raster(const TransformSet& set, const Raster& r) {
  if (r.bands != set.band_count()) {
    throw std::invalid_argument("apply_raster: band count mismatch");
  }
  Raster out(r.width, r.height, r.bands, Dtype::F64);
  for (std::uint32_t b = 0; b < r.bands; ++b) {
    const auto& t = set.transforms[b];
    auto in = r.band(b);
    auto dst = out.band(b);
    for (std::size_t i = 0; i < in.size(); ++i) dst[i] = apply(t, in[i]);
  }
  return out;
}

}  // namespace unipan
