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
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "unipan/numfmt.hpp"
#include "unipan/transform.hpp"

namespace unipan {

// UNIPAN-TRANSFORM v1: UTF-8, line-oriented, strict. Header lines in fixed
// order (target, epsilon, bands, m, n, seed), then one `band <i>: q0 ...`
// line per band. Quantiles are printed in shortest round-trip form, so a
// save/load cycle is bit-exact.

class TransformParseError : public std::runtime_error {
 public:
  explicit TransformParseError(const std::string& what)
      : std::runtime_error("transform-set: " + what) {}
};

inline std::string serialize_transform_set(const TransformSet& set) {
  set.check();
  std::string out;
  out += "UNIPAN-TRANSFORM v1\n";
  out += "target: ";
  out += (set.target.kind == TargetKind::StandardNormal) ? "normal" : "uniform";
  out += "\nepsilon: " + format_double(set.target.epsilon);
  out += "\nbands: " + std::to_string(set.band_count());
  out += "\nm: " + std::to_string(set.m);
  out += "\nn: " + std::to_string(set.n_sampled);
  out += "\nseed: " + std::to_string(set.seed);
  out += "\n";
  for (std::uint32_t b = 0; b < set.band_count(); ++b) {
    const auto& t = set.transforms[b];
    out += "band " + std::to_string(b) + ":";
    for (double q : t.quantiles) {
      out += ' ';
      out += format_double(q);
    }
    out += "\n";
  }
  return out;
}

namespace detail {

inline std::string_view expect_key(std::string_view line, std::string_view key,
                                   std::size_t lineno) {
  if (line.substr(0, key.size()) != key) {
    throw TransformParseError("line " + std::to_string(lineno + 1) +
                              ": expected key '" + std::string(key) + "'");
  }
  return line.substr(key.size());
}

}  // namespace detail

inline TransformSet parse_transform_set(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
      lines.push_back(text);
      text = {};
    } else {
      lines.push_back(text.substr(0, nl));
      text = text.substr(nl + 1);
    }
  }
  // allow exactly one trailing newline
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 8) throw TransformParseError("too few lines");
  if (lines[0] != "UNIPAN-TRANSFORM v1") {
    throw TransformParseError("bad magic line");
  }

  const std::string_view target_str =
      detail::expect_key(lines[1], "target: ", 1);
  TargetDistribution target;
  if (target_str == "normal") {
    target.kind = TargetKind::StandardNormal;
  } else if (target_str == "uniform") {
    target.kind = TargetKind::StandardUniform;
  } else {
    throw TransformParseError("target must be normal or uniform");
  }

  const auto eps = parse_double(detail::expect_key(lines[2], "epsilon: ", 2));
  if (!eps || !(*eps > 0.0 && *eps < 0.5)) {
    throw TransformParseError("epsilon outside (0, 0.5)");
  }
  target.epsilon = *eps;

  const auto bands = parse_u64(detail::expect_key(lines[3], "bands: ", 3));
  if (!bands || *bands < 1 || *bands > 0xffffffffull) {
    throw TransformParseError("bad band count");
  }
  const auto m = parse_u64(detail::expect_key(lines[4], "m: ", 4));
  if (!m || *m < 2 || *m > 0xffffffffull) {
    throw TransformParseError("bad quantile count");
  }
  const auto n = parse_u64(detail::expect_key(lines[5], "n: ", 5));
  if (!n) throw TransformParseError("bad sample count");
  const auto seed = parse_u64(detail::expect_key(lines[6], "seed: ", 6));
  if (!seed) throw TransformParseError("bad seed");

  if (lines.size() != 7 + *bands) {
    throw TransformParseError("band line count does not match header");
  }

  TransformSet set;
  set.m = static_cast<std::uint32_t>(*m);
  set.n_sampled = *n;
  set.seed = *seed;
  set.target = target;
  set.transforms.reserve(static_cast<std::size_t>(*bands));

  for (std::uint64_t b = 0; b < *bands; ++b) {
    const std::size_t lineno = 7 + static_cast<std::size_t>(b);
    std::string_view rest = detail::expect_key(
        lines[lineno], "band " + std::to_string(b) + ":", lineno);
    QuantileTransform t;
    t.target = target;
    t.band_index = static_cast<std::uint32_t>(b);
    t.quantiles.reserve(set.m);
    while (!rest.empty()) {
      if (rest.front() != ' ') {
        throw TransformParseError("band " + std::to_string(b) +
                                  ": malformed separator");
      }
      rest.remove_prefix(1);
      const auto sp = rest.find(' ');
      const std::string_view tok =
          (sp == std::string_view::npos) ? rest : rest.substr(0, sp);
      rest = (sp == std::string_view::npos) ? std::string_view{}
                                            : rest.substr(sp);
      const auto q = parse_double(tok);
      if (!q || !std::isfinite(*q)) {
        throw TransformParseError("band " + std::to_string(b) +
                                  ": bad quantile value");
      }
      t.quantiles.push_back(*q);
    }
    if (t.quantiles.size() != set.m) {
      throw TransformParseError("band " + std::to_string(b) +
                                ": quantile count does not match m");
    }
    if (!std::is_sorted(t.quantiles.begin(), t.quantiles.end())) {
      throw TransformParseError("band " + std::to_string(b) +
                                ": quantiles not non-decreasing");
    }
    set.transforms.push_back(std::move(t));
  }
  set.check();
  return set;
}

inline TransformSet read_transform_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TransformParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_transform_set(ss.str());
}

inline void write_transform_set(const std::string& path,
                                const TransformSet& set) {
  const std::string text = serialize_transform_set(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TransformParseError("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw TransformParseError("short write to " + path);
}

}  // namespace unipan
