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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unipan/metrics.hpp"
#include "unipan/raster.hpp"
#include "unipan/raster_io.hpp"
#include "unipan/resample.hpp"
#include "unipan/transform.hpp"

namespace unipan {

/// One LRMS/PAN pair (plus optional reference) with its resolution ratio.
struct FusionInputs {
  Raster lrms;
  Raster pan;
  std::optional<Raster> reference;
  std::uint32_t ratio = 1;

  void check() const {
    if (ratio == 0) {
      throw std::invalid_argument("FusionInputs: ratio must be positive");
    }
    if (pan.bands != 1) {
      throw std::invalid_argument("FusionInputs: PAN must be single-band");
    }
    if (pan.width != lrms.width * ratio || pan.height != lrms.height * ratio) {
      throw std::invalid_argument(
          "FusionInputs: PAN dimensions must be LRMS dimensions x ratio");
    }
    if (reference &&
        (reference->width != pan.width || reference->height != pan.height ||
         reference->bands != lrms.bands)) {
      throw std::invalid_argument(
          "FusionInputs: reference must match PAN scale and LRMS bands");
    }
  }
};

/// Stand-in for the fusion model: maps the transformed pair to a residual
/// raster at PAN scale with the LRMS band count.
using Fuser =
    std::function<Raster(const Raster& lrms_t, const Raster& pan_t,
                         std::uint32_t ratio)>;

/// Fit one TransformSet over a set of rasters: per band, pixels are pooled
/// across all rasters in input order, n are sampled without replacement
/// (splitmix64 stream seed ^ band), and m quantiles are taken.
inline TransformSet fit_set(std::span<const Raster> rasters, std::uint32_t m,
                            std::uint64_t n, std::uint64_t seed,
                            TargetDistribution target) {
  if (rasters.empty()) {
    throw std::invalid_argument("fit_set: no input rasters");
  }
  const std::uint32_t bands = rasters.front().bands;
  for (const auto& r : rasters) {
    if (r.bands != bands) {
      throw std::invalid_argument("fit_set: inconsistent band counts");
    }
  }
  if (n < 1) {
    throw std::invalid_argument("fit_set: n must be >= 1");
  }

  TransformSet set;
  set.m = m;
  set.n_sampled = n;
  set.seed = seed;
  set.target = target;
  set.transforms.reserve(bands);
  for (std::uint32_t b = 0; b < bands; ++b) {
    std::vector<double> pooled;
    std::size_t total = 0;
    for (const auto& r : rasters) total += r.pixels_per_band();
    pooled.reserve(total);
    for (const auto& r : rasters) {
      const auto span = r.band(b);
      pooled.insert(pooled.end(), span.begin(), span.end());
    }
    const auto sampled = sample_without_replacement(
        pooled, n, seed ^ static_cast<std::uint64_t>(b));
    set.transforms.push_back(fit_band(sampled, m, target, b));
  }
  return set;
}

/// Alg-style training fit: pools LRMS bands and the PAN band across all
/// training pairs and returns the two sets sharing m, n, seed and target.
inline std::pair<TransformSet, TransformSet> fit_transform_set(
    std::span<const FusionInputs> training, std::uint32_t m, std::uint64_t n,
    std::uint64_t seed, TargetDistribution target) {
  if (training.empty()) {
    throw std::invalid_argument("fit_transform_set: empty training list");
  }
  std::vector<Raster> lrms, pan;
  lrms.reserve(training.size());
  pan.reserve(training.size());
  for (const auto& in : training) {
    in.check();
    lrms.push_back(in.lrms);
    pan.push_back(in.pan);
  }
  return {fit_set(lrms, m, n, seed, target), fit_set(pan, m, n, seed, target)};
}

/// Transform one LRMS/PAN pair with the fitted sets.
inline std::pair<Raster, Raster> transform_pair(const TransformSet& lrms_set,
                                                const TransformSet& pan_set,
                                                const FusionInputs& inputs) {
  inputs.check();
  return {apply_raster(lrms_set, inputs.lrms),
          apply_raster(pan_set, inputs.pan)};
}

/// Residual fuser that always returns zeros; the fused result is then the
/// bicubic upsample alone.
inline Fuser zero_fuser() {
  return [](const Raster& lrms_t, const Raster& pan_t,
            std::uint32_t /*ratio*/) {
    return Raster(pan_t.width, pan_t.height, lrms_t.bands, Dtype::F64);
  };
}

/// Deterministic high-pass injection: the PAN detail plane (PAN minus its
/// degrade_pan blur) scaled per band by the global least-squares gain of
/// the upsampled band against the blurred PAN. Zero variance gives zero
/// gain.
inline Fuser highpass_fuser() {
  return [](const Raster& lrms_t, const Raster& pan_t, std::uint32_t ratio) {
    const Raster blurred = gaussian_blur(pan_t, ratio / 2.0);
    const Raster up = bicubic_upsample(lrms_t, ratio);
    const auto p = pan_t.band(0);
    const auto pb = blurred.band(0);
    const std::size_t npx = pb.size();

    double mean_pb = 0.0;
    for (double v : pb) mean_pb += v;
    mean_pb /= static_cast<double>(npx);
    double var_pb = 0.0;
    for (double v : pb) var_pb += (v - mean_pb) * (v - mean_pb);
    var_pb /= static_cast<double>(npx);

    Raster residual(pan_t.width, pan_t.height, lrms_t.bands, Dtype::F64);
    for (std::uint32_t b = 0; b < lrms_t.bands; ++b) {
      double gain = 0.0;
      if (var_pb > 0.0) {
        const auto ub = up.band(b);
        double mean_u = 0.0;
        for (double v : ub) mean_u += v;
        mean_u /= static_cast<double>(npx);
        double cov = 0.0;
        for (std::size_t i = 0; i < npx; ++i) {
          cov += (ub[i] - mean_u) * (pb[i] - mean_pb);
        }
        cov /= static_cast<double>(npx);
        gain = cov / var_pb;
      }
      auto out = residual.band(b);
      for (std::size_t i = 0; i < npx; ++i) {
        out[i] = gain * (p[i] - pb[i]);
      }
    }
    return residual;
  };
}

/// H = fuser(L~, P~) + L_up, with L_up the bicubic upsample of the
/// untransformed LRMS.
inline Raster fuse(const Fuser& fuser, const Raster& lrms_t,
                   const Raster& pan_t, const Raster& lrms_up) {
  if (pan_t.bands != 1) {
    throw std::invalid_argument("fuse: transformed PAN must be single-band");
  }
  if (lrms_up.width != pan_t.width || lrms_up.height != pan_t.height ||
      lrms_up.bands != lrms_t.bands) {
    throw std::invalid_argument("fuse: residual base shape mismatch");
  }
  if (lrms_t.width == 0 || pan_t.width % lrms_t.width != 0 ||
      pan_t.height % lrms_t.height != 0 ||
      pan_t.width / lrms_t.width != pan_t.height / lrms_t.height) {
    throw std::invalid_argument("fuse: PAN/LRMS scales inconsistent");
  }
  const std::uint32_t ratio = pan_t.width / lrms_t.width;
  Raster residual = fuser(lrms_t, pan_t, ratio);
  if (!residual.same_shape(lrms_up)) {
    throw std::invalid_argument("fuse: fuser output shape mismatch");
  }
  Raster out = residual;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] += lrms_up.data[i];
  }
  return out;
}

/// Mean absolute difference over all pixels and bands.
inline double residual_l1_loss(const Raster& h, const Raster& h_hat) {
  if (!h.same_shape(h_hat)) {
    throw std::invalid_argument("residual_l1_loss: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < h.data.size(); ++i) {
    sum += std::fabs(h.data[i] - h_hat.data[i]);
  }
  return sum / static_cast<double>(h.data.size());
}

/// Full no-reference evaluation of a fused result against its inputs.
inline MetricsReport evaluate(const Raster& h_hat, const FusionInputs& inputs,
                              std::uint32_t window) {
  inputs.check();
  if (h_hat.width != inputs.pan.width || h_hat.height != inputs.pan.height) {
    throw std::invalid_argument("evaluate: fused image not at PAN scale");
  }
  MetricsReport report;
  report.d_lambda = d_lambda(h_hat, inputs.lrms, window);
  report.d_s = d_s(h_hat, inputs.lrms, inputs.pan, inputs.ratio, window);
  report.d_rho = d_rho(h_hat, inputs.pan, inputs.ratio);
  report.qnr = qnr(report.d_lambda, report.d_s);
  return report;
}

}  // namespace unipan
