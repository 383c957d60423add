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
#include <stdexcept>
#include <vector>

#include "unipan/raster.hpp"

namespace unipan {

/// Keys cubic convolution kernel with a = -0.5. Partition of unity on the
/// integer lattice; support (-2, 2).
inline double keys_kernel(double t) {
  t = std::fabs(t);
  if (t <= 1.0) return ((1.5 * t - 2.5) * t) * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

namespace detail {

struct CubicTap {
  std::int64_t base;  // index of the first of four source samples
  double w[4];
};

// Pixel-center alignment: output center u maps to source (u + 0.5)/f - 0.5.
inline std::vector<CubicTap> cubic_taps(std::uint32_t out_size,
                                        std::uint32_t factor) {
  std::vector<CubicTap> taps(out_size);
  for (std::uint32_t u = 0; u < out_size; ++u) {
    const double s = (u + 0.5) / factor - 0.5;
    const double fl = std::floor(s);
    const double d = s - fl;
    CubicTap& t = taps[u];
    t.base = static_cast<std::int64_t>(fl) - 1;
    t.w[0] = keys_kernel(d + 1.0);
    t.w[1] = keys_kernel(d);
    t.w[2] = keys_kernel(1.0 - d);
    t.w[3] = keys_kernel(2.0 - d);
  }
  return taps;
}

inline std::int64_t clamp_index(std::int64_t i, std::int64_t n) {
  return std::clamp<std::int64_t>(i, 0, n - 1);
}

}  // namespace detail

/// Upsample every band by an integer factor with Keys a = -0.5 cubic
/// convolution. Sample coordinates are clamped at the borders; factor 1 is
/// the identity copy.
inline Raster bicubic_upsample(const Raster& src, std::uint32_t factor) {
  if (factor == 0) {
    throw std::invalid_argument("bicubic_upsample: factor must be >= 1");
  }
  if (factor == 1) return src;

  Raster dst(src.width * factor, src.height * factor, src.bands, src.dtype);
  const auto tx = detail::cubic_taps(dst.width, factor);
  const auto ty = detail::cubic_taps(dst.height, factor);
  const std::int64_t sw = src.width;
  const std::int64_t sh = src.height;

  for (std::uint32_t b = 0; b < src.bands; ++b) {
    auto in = src.band(b);
    auto out = dst.band(b);
    for (std::uint32_t oy = 0; oy < dst.height; ++oy) {
      const auto& wy = ty[oy];
      for (std::uint32_t ox = 0; ox < dst.width; ++ox) {
        const auto& wx = tx[ox];
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) {
          const std::int64_t yy = detail::clamp_index(wy.base + j, sh);
          double row = 0.0;
          for (int i = 0; i < 4; ++i) {
            const std::int64_t xx = detail::clamp_index(wx.base + i, sw);
            row += wx.w[i] * in[static_cast<std::size_t>(yy * sw + xx)];
          }
          acc += wy.w[j] * row;
        }
        out[static_cast<std::size_t>(oy) * dst.width + ox] = acc;
      }
    }
  }
  return dst;
}

/// Separable Gaussian blur, kernel truncated at 3*sigma, borders clamped.
inline Raster gaussian_blur(const Raster& src, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_blur: sigma must be positive");
  }
  const int radius = static_cast<int>(std::floor(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& w : kernel) w /= sum;

  const std::int64_t w = src.width;
  const std::int64_t h = src.height;
  Raster tmp = src;
  Raster dst = src;
  for (std::uint32_t b = 0; b < src.bands; ++b) {
    auto in = src.band(b);
    auto mid = tmp.band(b);
    auto out = dst.band(b);
    for (std::int64_t y = 0; y < h; ++y) {
      for (std::int64_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const std::int64_t xx = detail::clamp_index(x + k, w);
          acc += kernel[k + radius] * in[static_cast<std::size_t>(y * w + xx)];
        }
        mid[static_cast<std::size_t>(y * w + x)] = acc;
      }
    }
    for (std::int64_t y = 0; y < h; ++y) {
      for (std::int64_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const std::int64_t yy = detail::clamp_index(y + k, h);
          acc += kernel[k + radius] * mid[static_cast<std::size_t>(yy * w + x)];
        }
        out[static_cast<std::size_t>(y * w + x)] = acc;
      }
    }
  }
  return dst;
}

}  // namespace unipan
