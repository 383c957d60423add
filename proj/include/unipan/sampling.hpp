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
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace unipan {

/// splitmix64: tiny counter-based generator, identical output on every
/// platform. Used everywhere a fitted artifact must be reproducible from a
/// recorded seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) using the top 53 bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Draws n distinct elements without replacement via a partial
/// Fisher-Yates shuffle over indices. n >= values.size() returns the whole
/// input in its original order.
inline std::vector<double> sample_without_replacement(
    std::span<const double> values, std::uint64_t n, std::uint64_t seed) {
  const std::uint64_t total = values.size();
  if (n >= total) {
    return std::vector<double>(values.begin(), values.end());
  }
  std::vector<std::uint64_t> index(total);
  std::iota(index.begin(), index.end(), 0);
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = i + rng.next_below(total - i);
    std::swap(index[i], index[j]);
    out.push_back(values[static_cast<std::size_t>(index[i])]);
  }
  return out;
}

}  // namespace unipan
