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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "unipan/raster.hpp"
#include "unipan/sampling.hpp"

namespace unipan {

// UPRF container, version 1:
//   bytes 0-3   magic "UPRF"
//   byte  4     version (1)
//   byte  5     dtype code (1 = f32, 2 = f64, 3 = u16)
//   bytes 6-17  width, height, bands as little-endian u32
//   payload     band-sequential, row-major, little-endian scalars
// No padding, no checksum.

class RasterIoError : public std::runtime_error {
 public:
  enum class Code {
    BadMagic,
    BadVersion,
    BadDtype,
    BadDimensions,
    Truncated,
    TrailingData,
    NonFinite,
    Unreadable,
    Unwritable,
  };

  RasterIoError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

namespace detail {

inline void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

inline std::uint64_t get_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return v;
}

}  // namespace detail

inline std::string serialize_raster(const Raster& r) {
  if (r.width == 0 || r.height == 0 || r.bands == 0 ||
      r.data.size() != r.size()) {
    throw std::invalid_argument("serialize_raster: malformed raster");
  }
  std::string out;
  out.reserve(18 + r.size() * dtype_size(r.dtype));
  out += "UPRF";
  out.push_back(1);
  out.push_back(static_cast<char>(r.dtype));
  detail::put_u32le(out, r.width);
  detail::put_u32le(out, r.height);
  detail::put_u32le(out, r.bands);
  for (double v : r.data) {
    switch (r.dtype) {
      case Dtype::F32: {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("serialize_raster: non-finite value");
        }
        detail::put_u32le(out,
                          std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        break;
      }
      case Dtype::F64: {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("serialize_raster: non-finite value");
        }
        detail::put_u64le(out, std::bit_cast<std::uint64_t>(v));
        break;
      }
      case Dtype::U16: {
        if (!(v >= 0.0 && v <= 65535.0 && v == std::floor(v))) {
          throw std::invalid_argument(
              "serialize_raster: value not representable as u16");
        }
        const auto u = static_cast<std::uint16_t>(v);
        out.push_back(static_cast<char>(u & 0xff));
        out.push_back(static_cast<char>((u >> 8) & 0xff));
        break;
      }
    }
  }
  return out;
}

inline Raster parse_raster(const std::string& bytes) {
  using Code = RasterIoError::Code;
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "UPRF", 4) != 0) {
    throw RasterIoError(Code::BadMagic, "raster: bad magic, expected UPRF");
  }
  if (bytes.size() < 18) {
    throw RasterIoError(Code::Truncated, "raster: truncated header");
  }
  if (p[4] != 1) {
    throw RasterIoError(Code::BadVersion, "raster: unsupported version");
  }
  const std::uint8_t code = p[5];
  if (code < 1 || code > 3) {
    throw RasterIoError(Code::BadDtype, "raster: unknown dtype code");
  }
  const Dtype dtype = static_cast<Dtype>(code);
  const std::uint32_t w = detail::get_u32le(p + 6);
  const std::uint32_t h = detail::get_u32le(p + 10);
  const std::uint32_t b = detail::get_u32le(p + 14);
  if (w == 0 || h == 0 || b == 0) {
    throw RasterIoError(Code::BadDimensions, "raster: zero dimension");
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(w) * h * static_cast<std::uint64_t>(b);
  const std::uint64_t scalar = dtype_size(dtype);
  if (count > (std::uint64_t{1} << 40) ||
      count * scalar / scalar != count) {
    throw RasterIoError(Code::BadDimensions,
                        "raster: dimension product overflows");
  }
  const std::uint64_t payload = count * scalar;
  if (bytes.size() < 18 + payload) {
    throw RasterIoError(Code::Truncated, "raster: truncated payload");
  }
  if (bytes.size() > 18 + payload) {
    throw RasterIoError(Code::TrailingData, "raster: trailing bytes");
  }

  Raster r(w, h, b, dtype);
  const unsigned char* q = p + 18;
  for (std::uint64_t i = 0; i < count; ++i) {
    double v = 0.0;
    switch (dtype) {
      case Dtype::F32:
        v = static_cast<double>(
            std::bit_cast<float>(detail::get_u32le(q + i * 4)));
        break;
      case Dtype::F64:
        v = std::bit_cast<double>(detail::get_u64le(q + i * 8));
        break;
      case Dtype::U16:
        v = static_cast<double>(
            static_cast<std::uint16_t>(q[i * 2]) |
            (static_cast<std::uint16_t>(q[i * 2 + 1]) << 8));
        break;
    }
    if (!std::isfinite(v)) {
      throw RasterIoError(Code::NonFinite, "raster: non-finite payload value");
    }
    r.data[static_cast<std::size_t>(i)] = v;
  }
  return r;
}

inline Raster read_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw RasterIoError(RasterIoError::Code::Unreadable,
                        "raster: cannot open " + path);
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return parse_raster(bytes);
}

inline void write_raster(const std::string& path, const Raster& r) {
  const std::string bytes = serialize_raster(r);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RasterIoError(RasterIoError::Code::Unwritable,
                        "raster: cannot write " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw RasterIoError(RasterIoError::Code::Unwritable,
                        "raster: short write to " + path);
  }
}

/// Deterministic per-band pixel sampling. n >= band size returns the whole
/// band row-major; otherwise n distinct pixels chosen by a partial
/// Fisher-Yates shuffle over pixel indices, splitmix64 stream seed ^ band.
inline std::vector<double> sample_pixels(const Raster& r, std::uint32_t band,
                                         std::uint64_t n, std::uint64_t seed) {
  if (band >= r.bands) {
    throw std::invalid_argument("sample_pixels: band out of range");
  }
  return sample_without_replacement(r.band(band), n,
                                    seed ^ static_cast<std::uint64_t>(band));
}

}  // namespace unipan
