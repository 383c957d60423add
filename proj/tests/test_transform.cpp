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

#include "unipan/transform.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unipan/normal.hpp"

namespace unipan {
namespace {

// Brute-force oracle for Eq.-style quantiles: enumerate P(X <= x) over the
// sample values and take the literal infimum.
std::vector<double> quantiles_by_enumeration(std::vector<double> x,
                                             std::uint32_t m) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  std::vector<double> q(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    const double threshold = static_cast<double>(i) / (m - 1);
    double chosen = x.back();
    for (std::size_t j = 0; j < x.size(); ++j) {
      // P(X <= x[j]) = (last index with this value + 1) / n
      std::size_t last = j;
      while (last + 1 < x.size() && x[last + 1] == x[j]) ++last;
      if ((static_cast<double>(last + 1)) / n >= threshold) {
        chosen = x[j];
        break;
      }
    }
    q[i] = chosen;
  }
  return q;
}

TEST(ComputeQuantiles, SpecExamples) {
  EXPECT_EQ(compute_quantiles(std::vector<double>{10, 20, 30, 40, 50}, 5),
            (std::vector<double>{10, 20, 30, 40, 50}));
  EXPECT_EQ(compute_quantiles(std::vector<double>{7, 7, 7}, 4),
            (std::vector<double>{7, 7, 7, 7}));
  EXPECT_EQ(compute_quantiles(std::vector<double>{1, 2, 3, 4}, 3),
            (std::vector<double>{1, 2, 4}));
}

TEST(ComputeQuantiles, MMayExceedDistinctValues) {
  std::vector<double> x(100);
  for (int i = 0; i < 100; ++i) x[i] = i + 1;
  const auto q = compute_quantiles(x, 101);
  ASSERT_EQ(q.size(), 101u);
  EXPECT_EQ(q.front(), 1.0);
  EXPECT_EQ(q[1], 1.0);  // repeat forced by the inf definition
  EXPECT_EQ(q.back(), 100.0);
  EXPECT_TRUE(std::is_sorted(q.begin(), q.end()));
  EXPECT_EQ(q, quantiles_by_enumeration(x, 101));
}

TEST(ComputeQuantiles, MatchesEnumerationOracle) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_below(40);
    std::vector<double> x(n);
    for (auto& v : x) {
      v = static_cast<double>(rng.next_below(12));  // many ties
    }
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.next_below(20));
    EXPECT_EQ(compute_quantiles(x, m), quantiles_by_enumeration(x, m));
  }
}

TEST(ComputeQuantiles, MinAndMaxAtEnds) {
  const auto x = testing::uniform_samples(500, 3, -2.0, 9.0);
  const auto q = compute_quantiles(x, 17);
  EXPECT_EQ(q.front(), *std::min_element(x.begin(), x.end()));
  EXPECT_EQ(q.back(), *std::max_element(x.begin(), x.end()));
}

TEST(ComputeQuantiles, Errors) {
  EXPECT_THROW(compute_quantiles(std::vector<double>{}, 3),
               std::invalid_argument);
  EXPECT_THROW(compute_quantiles(std::vector<double>{1.0}, 1),
               std::invalid_argument);
  EXPECT_THROW(compute_quantiles(std::vector<double>{1.0, std::nan("")}, 3),
               std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(compute_quantiles(std::vector<double>{1.0, inf}, 3),
               std::invalid_argument);
}

TEST(Interp, SpecExamples) {
  const std::vector<double> q{1, 3, 5};
  const std::vector<double> u{0, 0.5, 1};
  EXPECT_EQ(interp(0.0, q, u), 0.0);
  EXPECT_DOUBLE_EQ(interp(4.0, q, u), 0.75);
  EXPECT_EQ(interp(7.0, q, u), 1.0);
}

TEST(Interp, BoundaryConditions) {
  const std::vector<double> q{1, 3, 5};
  const std::vector<double> u{0, 0.5, 1};
  EXPECT_EQ(interp(1.0, q, u), 0.0);   // x <= Q[0]
  EXPECT_EQ(interp(5.0, q, u), 1.0);   // knot hit is exact
  EXPECT_EQ(interp(3.0, q, u), 0.5);
}

TEST(Interp, PlateauSegmentsSkipped) {
  const std::vector<double> q{0, 1, 1, 2};
  const std::vector<double> u{0, 1.0 / 3, 2.0 / 3, 1};
  // upper-inclusive: x = 1 belongs to the first segment
  EXPECT_EQ(interp(1.0, q, u), 1.0 / 3);
  EXPECT_NEAR(interp(1.5, q, u), 2.0 / 3 + 0.5 * (1.0 / 3), 1e-15);
  EXPECT_NEAR(interp(0.5, q, u), 0.5 / 3, 1e-15);
}

TEST(Interp, LengthMismatch) {
  EXPECT_THROW(
      interp(1.0, std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
      std::invalid_argument);
  EXPECT_THROW(interp(1.0, std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(EcdfValue, StrictlyIncreasingMidpoint) {
  QuantileTransform t{{0.0, 1.0}, TargetDistribution::uniform(), 0};
  EXPECT_DOUBLE_EQ(ecdf_value(0.5, t), 0.5);
}

TEST(EcdfValue, PlateauMidpointConvention) {
  // Hand evaluation: forward lands on the first segment ending at the
  // plateau (1/3), backward on the last one (2/3); the average is 1/2.
  QuantileTransform t{{0.0, 1.0, 1.0, 2.0}, TargetDistribution::uniform(), 0};
  EXPECT_DOUBLE_EQ(ecdf_value(1.0, t), 0.5);
}

TEST(EcdfValue, SaturatesBelowAndAbove) {
  QuantileTransform t{{0.0, 1.0, 2.0}, TargetDistribution::uniform(), 0};
  EXPECT_EQ(ecdf_value(-5.0, t), 0.0);
  EXPECT_EQ(ecdf_value(9.0, t), 1.0);
}

TEST(EcdfValue, BidirectionalAgreementOnStrictQuantiles) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.next_below(60));
    std::vector<double> q(m);
    double acc = -3.0;
    for (auto& v : q) {
      acc += 1e-3 + rng.next_double();  // strictly increasing
      v = acc;
    }
    std::vector<double> u(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      u[i] = static_cast<double>(i) / (m - 1);
    }
    std::vector<double> qrev(m), urev(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      qrev[i] = -q[m - 1 - i];
      urev[i] = -u[m - 1 - i];
    }
    const double x = -4.0 + 10.0 * rng.next_double();
    const double fwd = interp(x, q, u);
    const double bwd = -interp(-x, qrev, urev);
    EXPECT_LE(std::fabs(fwd - bwd), 1e-12);

    QuantileTransform t{q, TargetDistribution::uniform(), 0};
    EXPECT_DOUBLE_EQ(ecdf_value(x, t), fwd / 2 + bwd / 2);
  }
}

TEST(InverseCdf, UniformIsIdentity) {
  const auto target = TargetDistribution::uniform();
  EXPECT_EQ(target.inverse_cdf(0.3), 0.3);
  EXPECT_EQ(target.inverse_cdf(0.0), 0.0);
  EXPECT_EQ(target.inverse_cdf(1.0), 1.0);
}

TEST(InverseCdf, NormalClampsTails) {
  const auto target = TargetDistribution::normal(1e-7);
  EXPECT_EQ(target.inverse_cdf(0.5), 0.0);
  EXPECT_NEAR(target.inverse_cdf(0.975), 1.959963984540054, 1e-9);
  const double lo = target.inverse_cdf(0.0);
  const double hi = target.inverse_cdf(1.0);
  EXPECT_TRUE(std::isfinite(lo));
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_NEAR(lo, -hi, 1e-12);
  EXPECT_NEAR(hi, 5.199337582, 1e-6);
}

TEST(InverseCdf, DomainErrors) {
  const auto target = TargetDistribution::uniform();
  EXPECT_THROW(target.inverse_cdf(-0.01), std::invalid_argument);
  EXPECT_THROW(target.inverse_cdf(1.01), std::invalid_argument);
  EXPECT_THROW(TargetDistribution::normal(0.7), std::invalid_argument);
}

TEST(FitBand, SpecExamples) {
  const auto t = fit_band(std::vector<double>{1, 2, 3, 4, 5}, 3,
                          TargetDistribution::uniform(), 2);
  EXPECT_EQ(t.quantiles, (std::vector<double>{1, 3, 5}));
  EXPECT_EQ(t.band_index, 2u);

  const auto single =
      fit_band(std::vector<double>{4.25}, 2, TargetDistribution::uniform());
  EXPECT_EQ(single.quantiles, (std::vector<double>{4.25, 4.25}));
}

TEST(Apply, GridExactnessUniform) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.next_below(30));
    std::vector<double> q(m);
    double acc = 0.0;
    for (auto& v : q) {
      acc += 0.01 + rng.next_double();
      v = acc;
    }
    QuantileTransform t{q, TargetDistribution::uniform(), 0};
    for (std::uint32_t i = 0; i < m; ++i) {
      EXPECT_EQ(apply(t, q[i]), static_cast<double>(i) / (m - 1));
    }
  }
}

TEST(Apply, MiddleQuantileMapsToZeroUnderNormal) {
  QuantileTransform t{{1.0, 2.0, 3.0, 4.0, 5.0},
                      TargetDistribution::normal(), 0};
  EXPECT_EQ(apply(t, 3.0), 0.0);
}

TEST(Apply, SaturationAboveMax) {
  QuantileTransform t{{1.0, 2.0, 3.0}, TargetDistribution::uniform(), 0};
  EXPECT_EQ(apply(t, 99.0), 1.0);
}

TEST(Apply, MonotoneAndInRange) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.next_below(40));
    std::vector<double> q(m);
    double acc = -1.0;
    for (auto& v : q) {
      // plateaus with probability ~1/3
      acc += (rng.next_below(3) == 0) ? 0.0 : rng.next_double();
      v = acc;
    }
    const bool normal = rng.next_below(2) == 0;
    const auto target = normal ? TargetDistribution::normal()
                               : TargetDistribution::uniform();
    QuantileTransform t{q, target, 0};
    double x = -2.0 + 4.0 * rng.next_double();
    double y = x + 3.0 * rng.next_double();
    const double fx = apply(t, x);
    const double fy = apply(t, y);
    EXPECT_LE(fx, fy);
    if (normal) {
      const double bound = normal_quantile(1.0 - 1e-7);
      EXPECT_GE(fx, -bound);
      EXPECT_LE(fy, bound);
    } else {
      EXPECT_GE(fx, 0.0);
      EXPECT_LE(fy, 1.0);
    }
  }
}

TEST(Apply, PushforwardReachesTarget) {
  // Empirical form of the pushforward identity: transformed samples follow
  // the target CDF.
  const auto samples = testing::normal_samples(10000, 77, 5.0, 2.5);
  for (bool normal : {false, true}) {
    const auto target = normal ? TargetDistribution::normal()
                               : TargetDistribution::uniform();
    const auto t = fit_band(samples, 1000, target);
    const auto z = apply(t, samples);
    const double ks =
        normal ? testing::ks_statistic(z, testing::erfc_normal_cdf)
               : testing::ks_statistic(z, [](double v) {
                   return std::clamp(v, 0.0, 1.0);
                 });
    EXPECT_LE(ks, 0.02);
  }
}

TEST(Apply, IdempotentOnTargetDistributedInput) {
  const auto samples = testing::uniform_samples(10000, 99);
  const auto t = fit_band(samples, 1000, TargetDistribution::uniform());
  double mean_abs = 0.0;
  for (double x : samples) mean_abs += std::fabs(apply(t, x) - x);
  mean_abs /= static_cast<double>(samples.size());
  EXPECT_LE(mean_abs, 0.02);
}

TEST(Apply, Determinism) {
  const auto samples = testing::uniform_samples(2000, 5);
  const auto t1 = fit_band(samples, 100, TargetDistribution::normal());
  const auto t2 = fit_band(samples, 100, TargetDistribution::normal());
  ASSERT_EQ(t1.quantiles, t2.quantiles);
  for (double x : {-1.0, 0.2, 0.5, 0.77, 2.0}) {
    EXPECT_EQ(apply(t1, x), apply(t2, x));
  }
}

TEST(ApplyRaster, ElementwisePerBand) {
  Raster r(2, 2, 2, Dtype::F64);
  r.data = {0.1, 0.1, 0.1, 0.1, 0.4, 0.4, 0.4, 0.4};
  TransformSet set;
  set.m = 2;
  set.target = TargetDistribution::uniform();
  set.transforms = {
      QuantileTransform{{0.0, 1.0}, set.target, 0},
      QuantileTransform{{0.0, 2.0}, set.target, 1},
  };
  const Raster out = apply_raster(set, r);
  ASSERT_TRUE(out.same_shape(r));
  for (double v : out.band(0)) EXPECT_DOUBLE_EQ(v, apply(set.transforms[0], 0.1));
  for (double v : out.band(1)) EXPECT_DOUBLE_EQ(v, apply(set.transforms[1], 0.4));
}

TEST(ApplyRaster, DegenerateOnePixel) {
  Raster r(1, 1, 1, Dtype::F64);
  r.data = {0.25};
  TransformSet set;
  set.m = 2;
  set.target = TargetDistribution::uniform();
  set.transforms = {QuantileTransform{{0.0, 1.0}, set.target, 0}};
  EXPECT_EQ(apply_raster(set, r).data[0], apply(set.transforms[0], 0.25));
}

TEST(ApplyRaster, BandCountMismatch) {
  Raster r(2, 2, 2, Dtype::F64);
  TransformSet set;
  set.m = 2;
  set.target = TargetDistribution::uniform();
  set.transforms = {QuantileTransform{{0.0, 1.0}, set.target, 0}};
  EXPECT_THROW(apply_raster(set, r), std::invalid_argument);
}

TEST(ApplyRaster, BandPermutationEquivariance) {
  const Raster r = testing::random_raster(6, 5, 3, 1234);
  TransformSet set;
  set.m = 4;
  set.target = TargetDistribution::uniform();
  for (std::uint32_t b = 0; b < 3; ++b) {
    set.transforms.push_back(
        fit_band(r.band(b), 4, set.target, b));
  }
  const Raster out = apply_raster(set, r);

  // permute bands (2, 0, 1) in both the raster and the set
  const std::uint32_t perm[3] = {2, 0, 1};
  Raster rp(r.width, r.height, 3, Dtype::F64);
  TransformSet setp;
  setp.m = 4;
  setp.target = set.target;
  for (std::uint32_t b = 0; b < 3; ++b) {
    auto dst = rp.band(b);
    auto src = r.band(perm[b]);
    std::copy(src.begin(), src.end(), dst.begin());
    auto t = set.transforms[perm[b]];
    t.band_index = b;
    setp.transforms.push_back(std::move(t));
  }
  const Raster outp = apply_raster(setp, rp);
  for (std::uint32_t b = 0; b < 3; ++b) {
    const auto expected = out.band(perm[b]);
    const auto actual = outp.band(b);
    for (std::size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(actual[i], expected[i]);
    }
  }
}

}  // namespace
}  // namespace unipan
