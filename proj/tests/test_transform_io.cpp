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

#include "unipan/transform_io.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace unipan {
namespace {

TransformSet sample_set() {
  TransformSet set;
  set.m = 3;
  set.n_sampled = 10000;
  set.seed = 42;
  set.target = TargetDistribution::normal(1e-7);
  set.transforms = {
      QuantileTransform{{0.1, 0.2, 0.30000000000000004}, set.target, 0},
      QuantileTransform{{-1.5, 0.0, 12.25}, set.target, 1},
  };
  return set;
}

TEST(TransformIo, SerializedLayout) {
  const std::string text = serialize_transform_set(sample_set());
  EXPECT_EQ(text,
            "UNIPAN-TRANSFORM v1\n"
            "target: normal\n"
            "epsilon: 1e-07\n"
            "bands: 2\n"
            "m: 3\n"
            "n: 10000\n"
            "seed: 42\n"
            "band 0: 0.1 0.2 0.30000000000000004\n"
            "band 1: -1.5 0 12.25\n");
}

TEST(TransformIo, RoundTripIsBitExact) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    TransformSet set;
    set.m = 2 + static_cast<std::uint32_t>(rng.next_below(50));
    set.n_sampled = rng.next();
    set.seed = rng.next();
    set.target = (trial % 2 == 0) ? TargetDistribution::uniform()
                                  : TargetDistribution::normal(1e-6);
    const std::uint32_t bands =
        1 + static_cast<std::uint32_t>(rng.next_below(5));
    for (std::uint32_t b = 0; b < bands; ++b) {
      std::vector<double> q(set.m);
      double acc = -50.0 * rng.next_double();
      for (auto& v : q) {
        acc += rng.next_double() * 3.0;
        v = acc;
      }
      set.transforms.push_back(QuantileTransform{q, set.target, b});
    }
    const std::string text = serialize_transform_set(set);
    const TransformSet back = parse_transform_set(text);
    EXPECT_EQ(back.m, set.m);
    EXPECT_EQ(back.n_sampled, set.n_sampled);
    EXPECT_EQ(back.seed, set.seed);
    EXPECT_EQ(back.target.kind, set.target.kind);
    EXPECT_EQ(back.target.epsilon, set.target.epsilon);
    ASSERT_EQ(back.band_count(), set.band_count());
    for (std::uint32_t b = 0; b < bands; ++b) {
      EXPECT_EQ(back.transforms[b].quantiles, set.transforms[b].quantiles);
    }
    // serialize again: bytes must be identical
    EXPECT_EQ(serialize_transform_set(back), text);
  }
}

TEST(TransformIo, FileRoundTrip) {
  const std::string path = ::testing::TempDir() + "unipan_set.txt";
  const TransformSet set = sample_set();
  write_transform_set(path, set);
  const TransformSet back = read_transform_set(path);
  EXPECT_EQ(serialize_transform_set(back), serialize_transform_set(set));
}

TEST(TransformIo, StrictParserRejections) {
  const std::string good = serialize_transform_set(sample_set());

  auto corrupt = [&](const std::string& from, const std::string& to) {
    std::string text = good;
    const auto pos = text.find(from);
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, from.size(), to);
    EXPECT_THROW(parse_transform_set(text), TransformParseError) << text;
  };

  corrupt("UNIPAN-TRANSFORM v1", "UNIPAN-TRANSFORM v2");
  corrupt("target: normal", "target: cauchy");
  corrupt("epsilon: 1e-07", "epsilon: 0.9");
  corrupt("epsilon: 1e-07", "tolerance: 1e-07");  // unknown key
  corrupt("bands: 2", "bands: 3");                // count mismatch
  corrupt("m: 3", "m: 4");                        // quantile count mismatch
  corrupt("seed: 42", "seed: -1");
  corrupt("band 1:", "band 7:");
  corrupt("0.1 0.2", "0.2 0.1");                  // not sorted
  corrupt("12.25", "12.25 99");                   // extra quantile
  corrupt("12.25", "inf");

  // trailing garbage
  EXPECT_THROW(parse_transform_set(good + "extra\n"), TransformParseError);
  EXPECT_THROW(parse_transform_set(""), TransformParseError);
}

}  // namespace
}  // namespace unipan
