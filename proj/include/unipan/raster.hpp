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
#include <span>
#include <stdexcept>
#include <vector>

namespace unipan {

/// Scalar type of a raster payload on disk. In memory every band is held
/// as double; all three codes round-trip losslessly through double.
enum class Dtype : std::uint8_t { F32 = 1, F64 = 2, U16 = 3 };

inline std::size_t dtype_size(Dtype d) {
  switch (d) {
    case Dtype::F32: return 4;
    case Dtype::F64: return 8;
    case Dtype::U16: return 2;
  }
  throw std::invalid_argument("dtype_size: unknown dtype code");
}

/// Multi-band image. Storage is band-sequential, each band row-major.
struct Raster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t bands = 0;
  Dtype dtype = Dtype::F64;
  std::vector<double> data;

  Raster() = default;

  Raster(std::uint32_t w, std::uint32_t h, std::uint32_t b,
         Dtype dt = Dtype::F64)
      : width(w), height(h), bands(b), dtype(dt) {
    if (w == 0 || h == 0 || b == 0) {
      throw std::invalid_argument("Raster: dimensions must be positive");
    }
    data.assign(static_cast<std::size_t>(w) * h * b, 0.0);
  }

  std::size_t pixels_per_band() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::size_t size() const { return pixels_per_band() * bands; }

  double& at(std::uint32_t band, std::uint32_t y, std::uint32_t x) {
    return data[band * pixels_per_band() +
                static_cast<std::size_t>(y) * width + x];
  }
  double at(std::uint32_t band, std::uint32_t y, std::uint32_t x) const {
    return data[band * pixels_per_band() +
                static_cast<std::size_t>(y) * width + x];
  }

  std::span<double> band(std::uint32_t b) {
    return std::span<double>(data).subspan(b * pixels_per_band(),
                                           pixels_per_band());
  }
  std::span<const double> band(std::uint32_t b) const {
    return std::span<const double>(data).subspan(b * pixels_per_band(),
                                                 pixels_per_band());
  }

  bool same_shape(const Raster& other) const {
    return width == other.width && height == other.height &&
           bands == other.bands;
  }
};

}  // namespace unipan
