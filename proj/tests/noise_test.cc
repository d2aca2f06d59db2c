#include "linsysid/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "linsysid/errors.hpp"

namespace linsysid {
namespace {

struct Moments {
  Vector mean;
  Vector variance;
};

template <typename Draw>
Moments moments(int dim, int count, Draw&& draw) {
  Vector sum = Vector::Zero(dim);
  Vector sum_sq = Vector::Zero(dim);
  for (int k = 0; k < count; ++k) {
    const Vector v = draw();
    sum += v;
    sum_sq += v.cwiseProduct(v);
  }
  Moments m;
  m.mean = sum / count;
  m.variance = sum_sq / count - m.mean.cwiseProduct(m.mean);
  return m;
}

TEST(DrawNoiseTest, NoneIsZero) {
  Stream s = SeedPolicy{1}.stream(0);
  EXPECT_TRUE(draw_noise({NoiseKind::none, 3.0}, 4, s).isZero(0.0));
}

TEST(DrawNoiseTest, GaussianMoments) {
  Stream s = SeedPolicy{2024}.stream(3);
  const NoiseSpec spec{NoiseKind::gaussian, 0.5};
  const Moments m = moments(2, 1000000, [&] { return draw_noise(spec, 2, s); });
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(m.mean(i), 0.0, 0.002);
    EXPECT_NEAR(m.variance(i), 0.25, 0.002);
  }
}

TEST(DrawNoiseTest, UniformMatchesVariance) {
  Stream s = SeedPolicy{5}.stream(0);
  const NoiseSpec spec{NoiseKind::uniform, 0.5};
  const Moments m = moments(1, 1000000, [&] { return draw_noise(spec, 1, s); });
  EXPECT_NEAR(m.mean(0), 0.0, 0.002);
  EXPECT_NEAR(m.variance(0), 0.25, 0.002);
  Stream t = SeedPolicy{5}.stream(1);
  for (int k = 0; k < 10000; ++k) {
    EXPECT_LE(std::abs(draw_noise(spec, 1, t)(0)), std::sqrt(3.0) * 0.5);
  }
}

TEST(DrawNoiseTest, GaussianTailFraction) {
  Stream s = SeedPolicy{77}.stream(0);
  const NoiseSpec spec{NoiseKind::gaussian, 0.5};
  int beyond = 0;
  const int count = 1000000;
  for (int k = 0; k < count; ++k) {
    if (std::abs(draw_noise(spec, 1, s)(0)) > 4.0 * spec.sigma_w) ++beyond;
  }
  EXPECT_LE(static_cast<double>(beyond) / count, 1.5e-4);
}

TEST(DrawNoiseTest, ReplayIsIdentical) {
  const SeedPolicy seeds{9};
  Stream a = seeds.stream(4, 2);
  Stream b = seeds.stream(4, 2);
  const NoiseSpec spec{NoiseKind::gaussian, 1.0};
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(draw_noise(spec, 3, a), draw_noise(spec, 3, b));
  }
  Stream c = seeds.stream(4, 2);
  Stream forked = c;
  EXPECT_EQ(draw_noise(spec, 5, c), draw_noise(spec, 5, forked));
}

TEST(DrawNoiseTest, RejectsBadArguments) {
  Stream s(1);
  EXPECT_THROW(draw_noise({NoiseKind::gaussian, 1.0}, 0, s), DimensionMismatch);
  EXPECT_THROW(draw_noise({NoiseKind::gaussian, -1.0}, 2, s), PreconditionViolated);
  EXPECT_THROW(draw_gaussian_input(-0.1, 1, s), PreconditionViolated);
}

TEST(GaussianInputTest, ZeroScale) {
  Stream s(3);
  EXPECT_TRUE(draw_gaussian_input(0.0, 3, s).isZero(0.0));
}

TEST(GaussianInputTest, Variance) {
  Stream s = SeedPolicy{31}.stream(0);
  const Moments m = moments(1, 1000000, [&] { return draw_gaussian_input(0.1, 1, s); });
  EXPECT_NEAR(m.variance(0), 0.01, 0.0002);
}

TEST(SeedPolicyTest, DistinctTrialsAreUncorrelated) {
  const SeedPolicy seeds{123};
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Stream a = seeds.stream(trial);
    Stream b = seeds.stream(trial + 1);
    const int count = 10000;
    double sab = 0, saa = 0, sbb = 0, sa = 0, sb = 0;
    for (int k = 0; k < count; ++k) {
      const double x = draw_gaussian_input(1.0, 1, a)(0);
      const double y = draw_gaussian_input(1.0, 1, b)(0);
      sa += x;
      sb += y;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    const double cov = sab / count - (sa / count) * (sb / count);
    const double corr = cov / std::sqrt((saa / count - sa * sa / count / count) *
                                        (sbb / count - sb * sb / count / count));
    EXPECT_LE(std::abs(corr), 0.03) << "trial " << trial;
  }
}

TEST(SeedPolicyTest, CellPoliciesDiffer) {
  const SeedPolicy seeds{7};
  EXPECT_NE(seeds.for_cell(1).master_seed, seeds.for_cell(2).master_seed);
  EXPECT_EQ(seeds.for_cell(1).master_seed, SeedPolicy{7}.for_cell(1).master_seed);
  EXPECT_NE(seeds.for_cell(1).master_seed, SeedPolicy{8}.for_cell(1).master_seed);
}

TEST(NoiseKindTest, ParseRoundTrip) {
  for (NoiseKind k : {NoiseKind::gaussian, NoiseKind::uniform, NoiseKind::none}) {
    EXPECT_EQ(parse_noise_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_noise_kind("laplace"), ConfigInvalid);
}

}  // namespace
}  // namespace linsysid
