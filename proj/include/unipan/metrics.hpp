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
#include <string>

#include "unipan/numfmt.hpp"
#include "unipan/raster.hpp"
#include "unipan/resample.hpp"

namespace unipan {

/// No-reference fusion quality for one fused result. qnr is always the
/// product (1 - d_lambda) * (1 - d_s) with unit exponents.
struct MetricsReport {
  double qnr = 1.0;
  double d_lambda = 0.0;
  double d_s = 0.0;
  double d_rho = 0.0;
};

inline std::string to_line(const MetricsReport& r) {
  return "qnr=" + format_double(r.qnr) +
         " d_lambda=" + format_double(r.d_lambda) +
         " d_s=" + format_double(r.d_s) + " d_rho=" + format_double(r.d_rho);
}

namespace detail {

struct BandView {
  const double* data;
  std::uint32_t width;
  std::uint32_t height;

  double at(std::uint32_t y, std::uint32_t x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

inline BandView view_band(const Raster& r, std::uint32_t b) {
  return BandView{r.band(b).data(), r.width, r.height};
}

// Block UIQI. The numerator/denominator grouping keeps the self-comparison
// bit-exactly 1 for non-constant blocks.
inline double uiqi_block(const BandView& a, const BandView& b,
                         std::uint32_t y0, std::uint32_t x0,
                         std::uint32_t win) {
  const double inv_n = 1.0 / (static_cast<double>(win) * win);
  double mean_a = 0.0, mean_b = 0.0;
  for (std::uint32_t y = y0; y < y0 + win; ++y) {
    for (std::uint32_t x = x0; x < x0 + win; ++x) {
      mean_a += a.at(y, x);
      mean_b += b.at(y, x);
    }
  }
  mean_a *= inv_n;
  mean_b *= inv_n;
  double var_a = 0.0, var_b = 0.0, cov = 0.0;
  for (std::uint32_t y = y0; y < y0 + win; ++y) {
    for (std::uint32_t x = x0; x < x0 + win; ++x) {
      const double da = a.at(y, x) - mean_a;
      const double db = b.at(y, x) - mean_b;
      var_a += da * da;
      var_b += db * db;
      cov += da * db;
    }
  }
  var_a *= inv_n;
  var_b *= inv_n;
  cov *= inv_n;
  const double num = (4.0 * cov) * (mean_a * mean_b);
  const double den = (var_a + var_b) * (mean_a * mean_a + mean_b * mean_b);
  if (den == 0.0) return 0.0;
  return num / den;
}

inline double uiqi_view(const BandView& a, const BandView& b,
                        std::uint32_t window) {
  const std::uint32_t bx = a.width / window;
  const std::uint32_t by = a.height / window;
  double sum = 0.0;
  for (std::uint32_t j = 0; j < by; ++j) {
    for (std::uint32_t i = 0; i < bx; ++i) {
      sum += uiqi_block(a, b, j * window, i * window, window);
    }
  }
  return sum / (static_cast<double>(bx) * by);
}

inline void require_window(std::uint32_t window, std::uint32_t w,
                           std::uint32_t h, const char* who) {
  if (window < 2 || window > std::min(w, h)) {
    throw std::invalid_argument(std::string(who) +
                                ": window outside [2, min(width, height)]");
  }
}

// Integer scale between two rasters of the same aspect (1 when equal).
inline std::uint32_t scale_ratio(const Raster& fine, const Raster& coarse,
                                 const char* who) {
  if (coarse.width == 0 || coarse.height == 0 ||
      fine.width % coarse.width != 0 ||
      fine.width / coarse.width != fine.height / coarse.height ||
      fine.height % coarse.height != 0) {
    throw std::invalid_argument(std::string(who) +
                                ": scales are not an integer ratio");
  }
  return fine.width / coarse.width;
}

}  // namespace detail

/// Universal image quality index, averaged over non-overlapping
/// window x window blocks. Blocks with a zero denominator contribute 0.
inline double uiqi(const Raster& a, const Raster& b, std::uint32_t window) {
  if (a.bands != 1 || b.bands != 1) {
    throw std::invalid_argument("uiqi: inputs must be single-band");
  }
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("uiqi: dimension mismatch");
  }
  detail::require_window(window, a.width, a.height, "uiqi");
  return detail::uiqi_view(detail::view_band(a, 0), detail::view_band(b, 0),
                           window);
}

/// Spectral distortion: mean absolute difference between the cross-band
/// UIQI tables of the fused image (window) and the low-resolution original
/// (window scaled down by their resolution ratio).
inline double d_lambda(const Raster& fused, const Raster& lrms,
                       std::uint32_t window) {
  const std::uint32_t bands = fused.bands;
  if (bands < 2 || lrms.bands != bands) {
    throw std::invalid_argument("d_lambda: need matching band count >= 2");
  }
  const std::uint32_t ratio = detail::scale_ratio(fused, lrms, "d_lambda");
  if (window % ratio != 0) {
    throw std::invalid_argument("d_lambda: window not divisible by ratio");
  }
  detail::require_window(window, fused.width, fused.height, "d_lambda");
  const std::uint32_t window_l = window / ratio;
  detail::require_window(window_l, lrms.width, lrms.height, "d_lambda");

  double sum = 0.0;
  for (std::uint32_t l = 0; l < bands; ++l) {
    for (std::uint32_t r = l + 1; r < bands; ++r) {
      const double qf = detail::uiqi_view(detail::view_band(fused, l),
                                          detail::view_band(fused, r), window);
      const double ql = detail::uiqi_view(detail::view_band(lrms, l),
                                          detail::view_band(lrms, r),
                                          window_l);
      sum += 2.0 * std::fabs(qf - ql);
    }
  }
  return sum / (static_cast<double>(bands) * (bands - 1));
}

/// Low-resolution PAN: Gaussian blur with sigma = ratio/2 (3 sigma
/// truncation, clamped borders) then decimation keeping the top-left sample
/// of each ratio x ratio cell. ratio 1 degenerates to the blur alone.
inline Raster degrade_pan(const Raster& pan, std::uint32_t ratio) {
  if (pan.bands != 1) {
    throw std::invalid_argument("degrade_pan: PAN must be single-band");
  }
  if (ratio == 0 || pan.width % ratio != 0 || pan.height % ratio != 0) {
    throw std::invalid_argument("degrade_pan: ratio must divide dimensions");
  }
  const Raster blurred = gaussian_blur(pan, ratio / 2.0);
  if (ratio == 1) return blurred;
  Raster out(pan.width / ratio, pan.height / ratio, 1, pan.dtype);
  for (std::uint32_t y = 0; y < out.height; ++y) {
    for (std::uint32_t x = 0; x < out.width; ++x) {
      out.at(0, y, x) = blurred.at(0, y * ratio, x * ratio);
    }
  }
  return out;
}

/// Spatial distortion: per band, |UIQI(fused_l, PAN) - UIQI(lrms_l, PAN_L)|
/// with the degraded PAN at LRMS scale, averaged over bands.
inline double d_s(const Raster& fused, const Raster& lrms, const Raster& pan,
                  std::uint32_t ratio, std::uint32_t window) {
  if (pan.bands != 1) {
    throw std::invalid_argument("d_s: PAN must be single-band");
  }
  if (fused.width != pan.width || fused.height != pan.height) {
    throw std::invalid_argument("d_s: fused image not at PAN scale");
  }
  if (ratio == 0 || lrms.width * ratio != pan.width ||
      lrms.height * ratio != pan.height) {
    throw std::invalid_argument("d_s: LRMS not at PAN scale / ratio");
  }
  if (fused.bands != lrms.bands) {
    throw std::invalid_argument("d_s: band count mismatch");
  }
  if (window % ratio != 0) {
    throw std::invalid_argument("d_s: window not divisible by ratio");
  }
  detail::require_window(window, fused.width, fused.height, "d_s");
  const std::uint32_t window_l = window / ratio;
  detail::require_window(window_l, lrms.width, lrms.height, "d_s");

  const Raster pan_low = degrade_pan(pan, ratio);
  const auto pan_view = detail::view_band(pan, 0);
  const auto pan_low_view = detail::view_band(pan_low, 0);
  double sum = 0.0;
  for (std::uint32_t l = 0; l < fused.bands; ++l) {
    const double qf =
        detail::uiqi_view(detail::view_band(fused, l), pan_view, window);
    const double ql =
        detail::uiqi_view(detail::view_band(lrms, l), pan_low_view, window_l);
    sum += std::fabs(qf - ql);
  }
  return sum / static_cast<double>(fused.bands);
}

/// QNR with unit exponents.
inline double qnr(double d_lambda_value, double d_s_value) {
  if (!(d_lambda_value >= 0.0 && d_lambda_value <= 1.0) ||
      !(d_s_value >= 0.0 && d_s_value <= 1.0)) {
    throw std::invalid_argument("qnr: inputs outside [0, 1]");
  }
  return (1.0 - d_lambda_value) * (1.0 - d_s_value);
}

/// Correlation-based spatial consistency: 1 minus the mean over bands and
/// non-overlapping sigma x sigma blocks of max(0, corr(F_l, P)). Blocks
/// where either side is constant contribute 0.
inline double d_rho(const Raster& fused, const Raster& pan,
                    std::uint32_t sigma) {
  if (pan.bands != 1) {
    throw std::invalid_argument("d_rho: PAN must be single-band");
  }
  if (fused.width != pan.width || fused.height != pan.height) {
    throw std::invalid_argument("d_rho: dimension mismatch");
  }
  detail::require_window(sigma, fused.width, fused.height, "d_rho");

  const auto pan_view = detail::view_band(pan, 0);
  const std::uint32_t bx = fused.width / sigma;
  const std::uint32_t by = fused.height / sigma;
  const double inv_n = 1.0 / (static_cast<double>(sigma) * sigma);
  double sum = 0.0;
  for (std::uint32_t l = 0; l < fused.bands; ++l) {
    const auto f = detail::view_band(fused, l);
    for (std::uint32_t j = 0; j < by; ++j) {
      for (std::uint32_t i = 0; i < bx; ++i) {
        const std::uint32_t y0 = j * sigma, x0 = i * sigma;
        double ma = 0.0, mb = 0.0;
        for (std::uint32_t y = y0; y < y0 + sigma; ++y) {
          for (std::uint32_t x = x0; x < x0 + sigma; ++x) {
            ma += f.at(y, x);
            mb += pan_view.at(y, x);
          }
        }
        ma *= inv_n;
        mb *= inv_n;
        double va = 0.0, vb = 0.0, cov = 0.0;
        for (std::uint32_t y = y0; y < y0 + sigma; ++y) {
          for (std::uint32_t x = x0; x < x0 + sigma; ++x) {
            const double da = f.at(y, x) - ma;
            const double db = pan_view.at(y, x) - mb;
            va += da * da;
            vb += db * db;
            cov += da * db;
          }
        }
        if (va > 0.0 && vb > 0.0) {
          sum += std::clamp(cov / std::sqrt(va * vb), 0.0, 1.0);
        }
      }
    }
  }
  const double count = static_cast<double>(fused.bands) * bx * by;
  return 1.0 - sum / count;
}

}  // namespace unipan
