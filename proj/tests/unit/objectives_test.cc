// Copyright 2026 The ejpeg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ejpeg/objectives.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "ejpeg/error.h"
#include "test_util.h"

namespace ejpeg {
namespace {

using testing::RandomImage;
using testing::RelativeError;

using Evaluator = std::function<ObjectiveValue(const PixelImage&)>;

double Dot(const PixelImage& a, const PixelImage& b) {
  double s = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    auto av = a.plane(c).values();
    auto bv = b.plane(c).values();
    for (size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  }
  return s;
}

PixelImage Axpy(const PixelImage& x, double h, const PixelImage& d) {
  PixelImage out = x;
  for (int c = 0; c < x.channels(); ++c) {
    auto o = out.plane(c).values();
    auto dv = d.plane(c).values();
    for (size_t i = 0; i < o.size(); ++i) o[i] += h * dv[i];
  }
  return out;
}

// Central differences along random directions and along every coordinate.
// Coordinate checks use a floor of tol * max|gradient| so that exact zeros
// are compared absolutely.
void ExpectGradientMatches(const Evaluator& f, const PixelImage& x, double tol,
                           double h = 1e-5) {
  const ObjectiveValue v = f(x);
  double scale = 0.0;
  for (int c = 0; c < x.channels(); ++c) {
    for (double g : v.gradient.plane(c).values()) scale = std::max(scale, std::abs(g));
  }
  ASSERT_GT(scale, 0.0) << "gradient vanishes, check is vacuous";
  std::mt19937 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    PixelImage d = RandomImage(x.width(), x.height(), x.channels(), rng, -1.0, 1.0);
    const double fd = (f(Axpy(x, h, d)).value - f(Axpy(x, -h, d)).value) / (2 * h);
    EXPECT_LT(RelativeError(Dot(v.gradient, d), fd), tol)
        << "direction " << trial << ": analytic " << Dot(v.gradient, d)
        << " fd " << fd;
  }
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        PixelImage p = x, m = x;
        p.at(c, xx, y) += h;
        m.at(c, xx, y) -= h;
        const double fd = (f(p).value - f(m).value) / (2 * h);
        const double g = v.gradient.at(c, xx, y);
        ASSERT_LT(RelativeError(g, fd, scale), tol)
            << "c=" << c << " x=" << xx << " y=" << y << " analytic " << g
            << " fd " << fd;
      }
    }
  }
}

RegionMask InteriorMask(int w, int h, int border) {
  return RegionMask::FromRect(w, h, {border, border, w - 2 * border, h - 2 * border});
}

// --- smooth absolute value -------------------------------------------------

TEST(SmoothAbs, ZeroAtOriginAndWithinEpsilonOfAbs) {
  EXPECT_EQ(SmoothAbs(0.0), 0.0);
  for (double d : {-100.0, -2.0, -1e-4, 1e-4, 0.3, 7.0}) {
    EXPECT_LE(std::abs(SmoothAbs(d) - std::abs(d)), kSmoothAbsEpsilon);
    EXPECT_GE(SmoothAbs(d), 0.0);
  }
}

// --- variance --------------------------------------------------------------

TEST(Variance, IdenticalImagesZeroDeltaGiveZero) {
  std::mt19937 rng(1);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  const auto v = EvalVariance(x, x, RegionMask::Full(16, 16), 0.0,
                              Direction::kIncrease);
  EXPECT_NEAR(v.value, 0.0, 1e-12);
  EXPECT_LT(MaxAbsDifference(v.gradient, PixelImage(16, 16, 3)), 1e-12);
}

TEST(Variance, ConstantPatchesGiveDeltaSquaredPerPatch) {
  const PixelImage x(16, 16, 1, 90.0);
  const double delta = 7.0;
  const auto v = EvalVariance(x, x, RegionMask::Full(16, 16), delta,
                              Direction::kIncrease);
  const int patches = (16 - kPatchSize + 1) * (16 - kPatchSize + 1);
  EXPECT_EQ(PatchPositions(RegionMask::Full(16, 16), 1).size(), size_t(patches));
  EXPECT_NEAR(v.value, delta * delta * patches, 1e-9);
}

TEST(Variance, AbsoluteModeTargetsLevel) {
  const PixelImage x(16, 16, 1, 90.0);
  const auto v = EvalVariance(x, x, RegionMask::Full(16, 16), 5.0,
                              Direction::kDecrease, VarianceMode::kAbsolute);
  EXPECT_NEAR(v.value, 25.0 * 121, 1e-9);
}

TEST(Variance, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(2);
  const PixelImage x0 = RandomImage(16, 16, 1, rng);
  const PixelImage x = RandomImage(16, 16, 1, rng);
  const RegionMask mask = InteriorMask(16, 16, 2);
  for (auto mode : {VarianceMode::kRelative, VarianceMode::kAbsolute}) {
    ExpectGradientMatches(
        [&](const PixelImage& p) {
          return EvalVariance(p, x0, mask, 30.0, Direction::kDecrease, mode);
        },
        x, 1e-4);
  }
}

TEST(Variance, EmptyMaskIsRejected) {
  const PixelImage x(16, 16, 1, 0.0);
  EXPECT_THROW(EvalVariance(x, x, RegionMask(16, 16), 1.0, Direction::kIncrease),
               Error);
  // A mask too thin to hold a whole patch is empty for patch tools.
  EXPECT_THROW(EvalVariance(x, x, RegionMask::FromRect(16, 16, {0, 0, 5, 16}),
                            1.0, Direction::kIncrease),
               Error);
}

// --- total variation -------------------------------------------------------

TEST(TotalVariation, ConstantRegionIsZeroWithZeroGradient) {
  const PixelImage x(16, 16, 3, 77.0);
  const auto v = EvalTv(x, RegionMask::Full(16, 16));
  EXPECT_EQ(v.value, 0.0);
  EXPECT_EQ(MaxAbsDifference(v.gradient, PixelImage(16, 16, 3)), 0.0);
}

// Sum of |x_p - x_q| over unordered pairs at Chebyshev distance 1.
double EnumeratedTv(const PixelImage& x) {
  double sum = 0.0;
  const int n = x.width() * x.height();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int ax = a % x.width(), ay = a / x.width();
      const int bx = b % x.width(), by = b / x.width();
      if (std::max(std::abs(ax - bx), std::abs(ay - by)) != 1) continue;
      sum += std::abs(x.at(0, ax, ay) - x.at(0, bx, by));
    }
  }
  return sum;
}

TEST(TotalVariation, StepEdgeMatchesEnumeration) {
  const int k = 12;
  const double h = 40.0;
  PixelImage x(16, k, 1, 10.0);
  for (int y = 0; y < k; ++y) {
    for (int xx = 8; xx < 16; ++xx) x.at(0, xx, y) = 10.0 + h;
  }
  const double v = EvalTv(x, RegionMask::Full(16, k)).value;
  const double oracle = EnumeratedTv(x);
  // 3 crossing pairs per row, minus the two diagonals leaving the image.
  EXPECT_DOUBLE_EQ(oracle, (3 * k - 2) * h);
  EXPECT_NEAR(v, oracle, (3 * k) * kSmoothAbsEpsilon);
}

TEST(TotalVariation, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(3);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  RegionMask mask = InteriorMask(16, 16, 3);
  mask.at(5, 5) = 0.5;
  ExpectGradientMatches([&](const PixelImage& p) { return EvalTv(p, mask); }, x,
                        1e-4);
}

// --- L1 target -------------------------------------------------------------

TEST(L1Target, MatchesTargetGivesZero) {
  std::mt19937 rng(4);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  EXPECT_EQ(EvalL1Target(x, x, RegionMask::Full(16, 16)).value, 0.0);
}

TEST(L1Target, SinglePixelOffByTwo) {
  const PixelImage t(16, 16, 1, 50.0);
  PixelImage x = t;
  x.at(0, 3, 4) += 2.0;
  EXPECT_NEAR(EvalL1Target(x, t, RegionMask::Full(16, 16)).value, 2.0,
              kSmoothAbsEpsilon);
}

TEST(L1Target, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(5);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  const PixelImage t = RandomImage(16, 16, 3, rng);
  const RegionMask mask = InteriorMask(16, 16, 1);
  ExpectGradientMatches(
      [&](const PixelImage& p) { return EvalL1Target(p, t, mask); }, x, 1e-4);
}

TEST(L1Target, ShapeMismatchIsRejected) {
  const PixelImage x(16, 16, 3, 0.0);
  try {
    EvalL1Target(x, PixelImage(16, 16, 1), RegionMask::Full(16, 16));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

// --- magnitude -------------------------------------------------------------

TEST(Magnitude, IdentityWithZeroDelta) {
  std::mt19937 rng(6);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  EXPECT_NEAR(EvalMagnitude(x, x, RegionMask::Full(16, 16), 0.0,
                            Direction::kIncrease)
                  .value,
              0.0, 1e-18);
}

TEST(Magnitude, DoubledAcMatchesUnitIncrease) {
  std::mt19937 rng(7);
  const PixelImage x0 = RandomImage(16, 16, 1, rng, 60, 120);
  PixelImage x = x0;
  for (double& v : x.plane(0).values()) v = 2.0 * v - 33.0;
  EXPECT_NEAR(EvalMagnitude(x, x0, RegionMask::Full(16, 16), 1.0,
                            Direction::kIncrease)
                  .value,
              0.0, 1e-18);
  EXPECT_GT(EvalMagnitude(x, x0, RegionMask::Full(16, 16), 1.0,
                          Direction::kDecrease)
                .value,
            1.0);
}

TEST(Magnitude, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(8);
  const PixelImage x0 = RandomImage(16, 16, 3, rng);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  const RegionMask mask = InteriorMask(16, 16, 0);
  ExpectGradientMatches(
      [&](const PixelImage& p) {
        return EvalMagnitude(p, x0, mask, 0.4, Direction::kIncrease);
      },
      x, 1e-4);
}

// --- patch dictionary ------------------------------------------------------

// Random left half; right half is a copy of it plus offset.
PixelImage MirroredHalves(std::mt19937& rng, double offset) {
  PixelImage x = RandomImage(32, 16, 1, rng);
  for (int y = 0; y < 16; ++y) {
    for (int xx = 0; xx < 16; ++xx) x.at(0, 16 + xx, y) = x.at(0, xx, y) + offset;
  }
  return x;
}

TEST(PatchDict, VerbatimCopyGivesZero) {
  std::mt19937 rng(9);
  const PixelImage x = MirroredHalves(rng, 0.0);
  const auto left = RegionMask::FromRect(32, 16, {0, 0, 16, 16});
  const auto right = RegionMask::FromRect(32, 16, {16, 0, 16, 16});
  for (bool normalize : {false, true}) {
    const PatchSet src = ExtractPatches(x, left, kSourcePatchStride, normalize);
    EXPECT_NEAR(EvalPatchDict(x, x, src, right).value, 0.0, 1e-18);
  }
}

TEST(PatchDict, ConstantOffsetGivesZero) {
  std::mt19937 rng(10);
  const PixelImage x = MirroredHalves(rng, 25.0);
  const auto left = RegionMask::FromRect(32, 16, {0, 0, 16, 16});
  const auto right = RegionMask::FromRect(32, 16, {16, 0, 16, 16});
  for (bool normalize : {false, true}) {
    const PatchSet src = ExtractPatches(x, left, kSourcePatchStride, normalize);
    EXPECT_NEAR(EvalPatchDict(x, x, src, right).value, 0.0, 1e-18);
  }
}

TEST(PatchDict, TwoSourcePatchesMatchExhaustiveOracle) {
  std::mt19937 rng(11);
  const PixelImage x = RandomImage(24, 12, 1, rng);
  // Source mask holds exactly two 6x6 patches at stride 2.
  const auto source_mask = RegionMask::FromRect(24, 12, {0, 0, 8, 6});
  const PatchSet src = ExtractPatches(x, source_mask, kSourcePatchStride, false);
  ASSERT_EQ(src.patches.size(), 2u);
  const auto target_mask = RegionMask::FromRect(24, 12, {10, 0, 14, 12});

  // Oracle: independent mean removal and minimum over both candidates.
  auto centered = [&](int px, int py) {
    std::vector<double> v;
    double mean = 0.0;
    for (int dy = 0; dy < 6; ++dy)
      for (int dx = 0; dx < 6; ++dx) mean += x.at(0, px + dx, py + dy);
    mean /= 36.0;
    for (int dy = 0; dy < 6; ++dy)
      for (int dx = 0; dx < 6; ++dx) v.push_back(x.at(0, px + dx, py + dy) - mean);
    return v;
  };
  const std::vector<double> s0 = centered(0, 0), s1 = centered(2, 0);
  double oracle = 0.0;
  std::vector<int> oracle_nn;
  for (int py = 0; py + 6 <= 12; py += 4) {
    for (int px = 10; px + 6 <= 24; px += 4) {
      const auto t = centered(px, py);
      double d0 = 0, d1 = 0;
      for (int i = 0; i < 36; ++i) {
        d0 += (t[i] - s0[i]) * (t[i] - s0[i]);
        d1 += (t[i] - s1[i]) * (t[i] - s1[i]);
      }
      oracle += std::min(d0, d1);
      oracle_nn.push_back(d1 < d0 ? 1 : 0);
    }
  }
  EXPECT_NEAR(EvalPatchDict(x, x, src, target_mask).value, oracle, 1e-9 * oracle);
  EXPECT_EQ(PatchDictAssignment(x, src, target_mask), oracle_nn);
}

TEST(PatchDict, TiesGoToLowestSourceIndex) {
  // Two identical source patches: every target must pick index 0.
  PixelImage x(24, 6, 1, 0.0);
  for (int xx = 0; xx < 24; ++xx) x.at(0, xx, 0) = (xx % 2) * 100.0;
  for (int y = 1; y < 6; ++y)
    for (int xx = 0; xx < 24; ++xx) x.at(0, xx, y) = x.at(0, xx, 0);
  const PatchSet src = ExtractPatches(
      x, RegionMask::FromRect(24, 6, {0, 0, 10, 6}), kSourcePatchStride, false);
  ASSERT_EQ(src.patches.size(), 3u);
  for (int idx : PatchDictAssignment(x, src, RegionMask::FromRect(24, 6, {12, 0, 12, 6}))) {
    EXPECT_EQ(idx, 0);
  }
}

TEST(PatchDict, MeanTranslationInvariance) {
  std::mt19937 rng(12);
  const PixelImage x = RandomImage(32, 16, 3, rng);
  const auto left = RegionMask::FromRect(32, 16, {0, 0, 16, 16});
  const auto right = RegionMask::FromRect(32, 16, {16, 0, 16, 16});
  for (bool normalize : {false, true}) {
    const PatchSet src = ExtractPatches(x, left, kSourcePatchStride, normalize);
    PixelImage shifted = x;
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < 16; ++y)
        for (int xx = 16; xx < 32; ++xx) shifted.at(c, xx, y) += 17.0;
    const double a = EvalPatchDict(x, x, src, right).value;
    const double b = EvalPatchDict(shifted, x, src, right).value;
    EXPECT_LT(RelativeError(a, b), 1e-10);
  }
}

TEST(PatchDict, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(13);
  const PixelImage x0 = RandomImage(16, 16, 1, rng);
  const PixelImage x = RandomImage(16, 16, 1, rng);
  const auto source = RegionMask::FromRect(16, 16, {0, 0, 16, 8});
  const auto target = RegionMask::FromRect(16, 16, {0, 6, 16, 10});
  for (bool normalize : {false, true}) {
    const PatchSet src = ExtractPatches(x0, source, kSourcePatchStride, normalize);
    ExpectGradientMatches(
        [&](const PixelImage& p) { return EvalPatchDict(p, x0, src, target); },
        x, 1e-4);
  }
}

TEST(PatchDict, EmptySourceOrTargetIsRejected) {
  const PixelImage x(16, 16, 1, 0.0);
  EXPECT_THROW(ExtractPatches(x, RegionMask(16, 16), 2, false), Error);
  const PatchSet empty{1, 2, false, {}, {}};
  EXPECT_THROW(EvalPatchDict(x, x, empty, RegionMask::Full(16, 16)), Error);
}

// --- periodicity -----------------------------------------------------------

PixelImage Sinusoid(int w, int h, double period, double amplitude, Axis axis) {
  PixelImage x(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int xx = 0; xx < w; ++xx) {
      const double t = axis == Axis::kHorizontal ? xx : y;
      x.at(0, xx, y) = 128.0 + amplitude * std::sin(2 * std::numbers::pi * t / period);
    }
  }
  return x;
}

TEST(Periodicity, MatchingPeriodGivesZero) {
  const PixelImage x = Sinusoid(64, 8, 16, 50, Axis::kHorizontal);
  EXPECT_NEAR(EvalPeriodicity(x, RegionMask::Full(64, 8), {{16, 0}}).value, 0.0,
              1e-18);
}

TEST(Periodicity, WrongPeriodMatchesClosedForm) {
  const double a = 50.0, period = 16.0;
  const int lag = 4;
  const PixelImage x = Sinusoid(68, 4, period, a, Axis::kHorizontal);
  // 64 pairs per row cover whole periods, so the mean of cos^2 is exact.
  const double per_pair =
      2 * a * a * std::pow(std::sin(std::numbers::pi * lag / period), 2);
  const double expected = 64 * 4 * per_pair;
  EXPECT_NEAR(EvalPeriodicity(x, RegionMask::Full(68, 4), {{lag, 0}}).value,
              expected, 1e-9 * expected);
}

TEST(Periodicity, ShiftByFullPeriodPreservesInteriorValue) {
  std::mt19937 rng(14);
  // Horizontally 8-periodic random texture.
  const PixelImage tile = RandomImage(8, 24, 1, rng);
  PixelImage x(40, 24, 1), shifted(40, 24, 1);
  for (int y = 0; y < 24; ++y) {
    for (int xx = 0; xx < 40; ++xx) {
      x.at(0, xx, y) = tile.at(0, xx % 8, y);
      shifted.at(0, xx, y) = tile.at(0, (xx + 32) % 8, y);
    }
  }
  const auto mask = RegionMask::FromRect(40, 24, {8, 4, 24, 16});
  const std::vector<PeriodVector> dirs = {{5, 0}, {0, 3}};
  EXPECT_DOUBLE_EQ(EvalPeriodicity(x, mask, dirs).value,
                   EvalPeriodicity(shifted, mask, dirs).value);
  EXPECT_GT(EvalPeriodicity(x, mask, dirs).value, 0.0);
}

TEST(Periodicity, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(15);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  const RegionMask mask = InteriorMask(16, 16, 2);
  ExpectGradientMatches(
      [&](const PixelImage& p) {
        return EvalPeriodicity(p, mask, {{3, 1}, {0, 5}});
      },
      x, 1e-4);
}

TEST(Periodicity, InvalidVectorsAreRejected) {
  const PixelImage x(16, 16, 1, 0.0);
  const auto mask = RegionMask::FromRect(16, 16, {0, 0, 8, 8});
  EXPECT_THROW(EvalPeriodicity(x, mask, {{0, 0}}), Error);
  EXPECT_THROW(EvalPeriodicity(x, mask, {{8, 0}}), Error);
  EXPECT_THROW(EvalPeriodicity(x, mask, {}), Error);
  EXPECT_THROW(EvalPeriodicity(x, mask, {{1, 0}, {0, 1}, {1, 1}}), Error);
}

// Independent oracle: Pearson correlation of a gray image with its lagged
// self over the whole frame.
double OracleCorrelation(const PixelImage& x, int lag, Axis axis) {
  std::vector<double> a, b;
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      const int qx = axis == Axis::kHorizontal ? xx + lag : xx;
      const int qy = axis == Axis::kVertical ? y + lag : y;
      if (qx >= x.width() || qy >= x.height()) continue;
      a.push_back(x.at(0, xx, y));
      b.push_back(x.at(0, qx, qy));
    }
  }
  const double n = a.size();
  double ma = 0, mb = 0;
  for (size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

TEST(AutoPeriod, SinusoidOfPeriodEight) {
  const PixelImage x = Sinusoid(64, 8, 8, 40, Axis::kHorizontal);
  const auto est = AutoPeriod(x, RegionMask::Full(64, 8), Axis::kHorizontal);
  EXPECT_EQ(est.period, 8);
  EXPECT_FALSE(est.low_confidence);
  const PixelImage xv = Sinusoid(8, 64, 8, 40, Axis::kVertical);
  EXPECT_EQ(AutoPeriod(xv, RegionMask::Full(8, 64), Axis::kVertical).period, 8);
}

TEST(AutoPeriod, SuperposedPeriodsPickTheFundamentalPeak) {
  PixelImage x(96, 8, 1);
  for (int y = 0; y < 8; ++y) {
    for (int xx = 0; xx < 96; ++xx) {
      x.at(0, xx, y) = 128 + 30 * std::sin(2 * std::numbers::pi * xx / 6) +
                       10 * std::sin(2 * std::numbers::pi * xx / 12);
    }
  }
  const auto est = AutoPeriod(x, RegionMask::Full(96, 8), Axis::kHorizontal);
  EXPECT_EQ(est.period, 6);
  // Oracle: lag 6 is a local peak above 0.5 although lag 12 correlates more.
  const double r5 = OracleCorrelation(x, 5, Axis::kHorizontal);
  const double r6 = OracleCorrelation(x, 6, Axis::kHorizontal);
  const double r7 = OracleCorrelation(x, 7, Axis::kHorizontal);
  EXPECT_GT(r6, r5);
  EXPECT_GT(r6, r7);
  EXPECT_GE(r6, kPeriodPeakAccept);
  EXPECT_GT(OracleCorrelation(x, 12, Axis::kHorizontal), r6);
  EXPECT_NEAR(est.correlation, r6, 1e-9);
}

TEST(AutoPeriod, WhiteNoiseIsLowConfidenceArgmax) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    std::mt19937 rng(100 + seed);
    const PixelImage x = RandomImage(64, 64, 1, rng);
    const auto est = AutoPeriod(x, RegionMask::Full(64, 64), Axis::kHorizontal);
    EXPECT_TRUE(est.low_confidence) << "seed " << seed << " r " << est.correlation;
    int best = 3;
    for (int lag = 3; lag <= 32; ++lag) {
      if (OracleCorrelation(x, lag, Axis::kHorizontal) >
          OracleCorrelation(x, best, Axis::kHorizontal)) {
        best = lag;
      }
    }
    EXPECT_EQ(est.period, best);
  }
}

TEST(AutoPeriod, SmallRegionIsRejected) {
  const PixelImage x(16, 16, 1, 0.0);
  EXPECT_THROW(AutoPeriod(x, RegionMask::FromRect(16, 16, {0, 0, 5, 16}),
                          Axis::kHorizontal),
               Error);
}

// --- diversity -------------------------------------------------------------

TEST(Diversity, IdenticalOutputsHaveZeroPairwiseTerm) {
  std::mt19937 rng(16);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  EXPECT_EQ(EvalDiversity({x, x, x}, x, RegionMask::Full(16, 16), 0.0).value, 0.0);
}

TEST(Diversity, OnePixelDifferenceOfThree) {
  const PixelImage a(16, 16, 1, 10.0);
  PixelImage b = a;
  b.at(0, 2, 2) += 3.0;
  const double v = EvalDiversity({a, b}, a, RegionMask::Full(16, 16), 0.0).value;
  EXPECT_NEAR(-v, 3.0, kSmoothAbsEpsilon);
}

TEST(Diversity, GradientsMatchFiniteDifferences) {
  std::mt19937 rng(17);
  const PixelImage x0 = RandomImage(16, 16, 3, rng);
  std::vector<PixelImage> outs = {RandomImage(16, 16, 3, rng),
                                  RandomImage(16, 16, 3, rng),
                                  RandomImage(16, 16, 3, rng)};
  const RegionMask mask = InteriorMask(16, 16, 2);
  for (size_t i = 0; i < outs.size(); ++i) {
    ExpectGradientMatches(
        [&](const PixelImage& p) {
          auto copy = outs;
          copy[i] = p;
          auto d = EvalDiversity(copy, x0, mask, 0.7);
          return ObjectiveValue{d.value, d.gradients[i]};
        },
        outs[i], 1e-4);
  }
}

TEST(Diversity, TooFewOutputsIsRejected) {
  const PixelImage x(16, 16, 1, 0.0);
  EXPECT_THROW(EvalDiversity({x}, x, RegionMask::Full(16, 16), 0.0), Error);
}

// --- range -----------------------------------------------------------------

TEST(Range, InRangeIsZero) {
  std::mt19937 rng(18);
  const PixelImage x = RandomImage(16, 16, 3, rng, 16, 235);
  EXPECT_EQ(EvalRange(x, RegionMask::Full(16, 16)).value, 0.0);
}

TEST(Range, OnePixelAboveRange) {
  PixelImage x(8, 8, 1, 100.0);
  x.at(0, 1, 1) = 240.0;
  EXPECT_NEAR(EvalRange(x, RegionMask::Full(8, 8)).value, 5.0 / 64,
              kSmoothAbsEpsilon / 64);
}

TEST(Range, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(19);
  const PixelImage x = RandomImage(16, 16, 3, rng, -30, 285);
  ExpectGradientMatches(
      [&](const PixelImage& p) { return EvalRange(p, InteriorMask(16, 16, 1)); },
      x, 1e-4);
}

TEST(Range, InvertedBoundsAreRejected) {
  const PixelImage x(8, 8, 1, 0.0);
  EXPECT_THROW(EvalRange(x, RegionMask::Full(8, 8), 200, 100), Error);
}

// --- HSV -------------------------------------------------------------------

TEST(Hsv, ZeroAmountIsIdentity) {
  std::mt19937 rng(20);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  for (auto attr : {HsvAttribute::kHue, HsvAttribute::kSaturation, HsvAttribute::kValue}) {
    EXPECT_LE(MaxAbsDifference(BuildHsvTarget(x, RegionMask::Full(16, 16), attr, 0.0), x),
              1.0);
  }
}

TEST(Hsv, ValueIncreaseScalesGray) {
  const PixelImage x(4, 4, 3, 128.0);
  const PixelImage t = BuildHsvTarget(x, RegionMask::Full(4, 4), HsvAttribute::kValue, 0.1);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(t.at(c, 1, 1), 128.0 * 1.1, 1e-9);
  const PixelImage bright(4, 4, 3, 250.0);
  EXPECT_NEAR(BuildHsvTarget(bright, RegionMask::Full(4, 4), HsvAttribute::kValue, 0.1)
                  .at(0, 0, 0),
              255.0, 1e-9);
}

TEST(Hsv, FullTurnOfHueIsIdentity) {
  std::mt19937 rng(21);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  EXPECT_LE(MaxAbsDifference(
                BuildHsvTarget(x, RegionMask::Full(16, 16), HsvAttribute::kHue, 360.0), x),
            1.0);
}

TEST(Hsv, HueShiftRotatesPrimaries) {
  PixelImage red(1, 1, 3, 0.0);
  red.at(0, 0, 0) = 255.0;
  const PixelImage g = BuildHsvTarget(red, RegionMask::Full(1, 1), HsvAttribute::kHue, 120.0);
  EXPECT_NEAR(g.at(0, 0, 0), 0.0, 1e-9);
  EXPECT_NEAR(g.at(1, 0, 0), 255.0, 1e-9);
}

TEST(Hsv, UnmaskedPixelsAreUntouched) {
  std::mt19937 rng(22);
  const PixelImage x = RandomImage(16, 16, 3, rng);
  const auto mask = RegionMask::FromRect(16, 16, {0, 0, 8, 16});
  const PixelImage t = BuildHsvTarget(x, mask, HsvAttribute::kHue, 90.0);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(t.at(c, 12, 3), x.at(c, 12, 3));
}

TEST(Hsv, GrayscaleIsRejected) {
  EXPECT_THROW(BuildHsvTarget(PixelImage(4, 4, 1), RegionMask::Full(4, 4),
                              HsvAttribute::kHue, 10.0),
               Error);
}

// --- classifier ------------------------------------------------------------

TEST(ClassifierObjective, TemplateCropScoresOne) {
  const auto hook = FindClassifier("toy");
  const auto& toy = dynamic_cast<const ToyTemplateClassifier&>(*hook);
  PixelImage x(32, 32, 1, 0.0);
  for (int y = 0; y < 16; ++y)
    for (int xx = 0; xx < 16; ++xx) x.at(0, 8 + xx, 8 + y) = toy.Template(3).at(xx, y);
  const auto mask = RegionMask::FromRect(32, 32, {8, 8, 16, 16});
  const auto scores = ClassifierScores(x, mask, *hook);
  EXPECT_NEAR(scores[3], 1.0, 1e-12);
  for (int d = 0; d < 10; ++d) {
    if (d != 3) {
      EXPECT_LT(scores[d], 1.0 - 1e-6);
    }
  }
  EXPECT_NEAR(EvalClassifier(x, mask, *hook, 3).value, -1.0, 1e-12);
}

TEST(ClassifierObjective, UniformCropTies) {
  const auto hook = FindClassifier("toy");
  const PixelImage x(16, 16, 3, 120.0);
  for (double s : ClassifierScores(x, RegionMask::Full(16, 16), *hook)) EXPECT_EQ(s, 0.0);
}

TEST(ClassifierObjective, GradientMatchesFiniteDifferences) {
  const auto hook = FindClassifier("toy");
  std::mt19937 rng(23);
  for (int channels : {1, 3}) {
    const PixelImage x = RandomImage(16, 16, channels, rng);
    // Non-square support exercises the bilinear resize and its adjoint.
    const auto mask = RegionMask::FromRect(16, 16, {1, 2, 13, 12});
    ExpectGradientMatches(
        [&](const PixelImage& p) { return EvalClassifier(p, mask, *hook, 7); }, x,
        1e-3);
  }
}

TEST(ClassifierObjective, BadHookOrClassIsRejected) {
  try {
    FindClassifier("no-such-hook");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  const PixelImage x(16, 16, 1, 0.0);
  EXPECT_THROW(EvalClassifier(x, RegionMask::Full(16, 16), *FindClassifier("toy"), 10),
               Error);
}

// --- cross-objective properties --------------------------------------------

struct Case {
  const char* name;
  std::function<ObjectiveValue(const PixelImage&, const RegionMask&)> eval;
  bool signed_value;
};

std::vector<Case> AllObjectives(const PixelImage& x0, const PixelImage& other) {
  auto hook = FindClassifier("toy");
  return {
      {"variance", [=](const PixelImage& x, const RegionMask& m) {
         return EvalVariance(x, x0, m, 12, Direction::kIncrease); }, false},
      {"tv", [](const PixelImage& x, const RegionMask& m) { return EvalTv(x, m); }, false},
      {"l1", [=](const PixelImage& x, const RegionMask& m) {
         return EvalL1Target(x, x0, m); }, false},
      {"magnitude", [=](const PixelImage& x, const RegionMask& m) {
         return EvalMagnitude(x, x0, m, 0.3, Direction::kDecrease); }, false},
      {"patch_dict", [=](const PixelImage& x, const RegionMask& m) {
         const PatchSet src = ExtractPatches(x0, RegionMask::Full(24, 24), 2, true);
         return EvalPatchDict(x, x0, src, m); }, false},
      {"periodicity", [](const PixelImage& x, const RegionMask& m) {
         return EvalPeriodicity(x, m, {{4, 0}, {1, 3}}); }, false},
      {"diversity", [=](const PixelImage& x, const RegionMask& m) {
         auto d = EvalDiversity({x, other}, x0, m, 0.5);
         return ObjectiveValue{d.value, d.gradients[0]}; }, true},
      {"range", [](const PixelImage& x, const RegionMask& m) { return EvalRange(x, m); }, false},
      {"classifier", [=](const PixelImage& x, const RegionMask& m) {
         return EvalClassifier(x, m, *hook, 2); }, true},
  };
}

TEST(ObjectiveProperties, UnmaskedPixelsDoNotMatter) {
  std::mt19937 rng(24);
  const PixelImage x0 = RandomImage(24, 24, 3, rng, -20, 275);
  const PixelImage other = RandomImage(24, 24, 3, rng);
  const PixelImage x = RandomImage(24, 24, 3, rng, -20, 275);
  RegionMask mask = RegionMask::FromRect(24, 24, {4, 3, 15, 17});
  mask.at(10, 10) = 0.25;
  PixelImage zeroed = x;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 24; ++y)
      for (int xx = 0; xx < 24; ++xx)
        if (!mask.Selected(xx, y)) zeroed.at(c, xx, y) = 0.0;
  for (const auto& obj : AllObjectives(x0, other)) {
    const auto a = obj.eval(x, mask);
    const auto b = obj.eval(zeroed, mask);
    EXPECT_EQ(a.value, b.value) << obj.name;
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < 24; ++y) {
        for (int xx = 0; xx < 24; ++xx) {
          if (mask.Selected(xx, y)) {
            ASSERT_EQ(a.gradient.at(c, xx, y), b.gradient.at(c, xx, y)) << obj.name;
          }
        }
      }
    }
  }
}

TEST(ObjectiveProperties, NonNegativeExceptSignedSurrogates) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    std::mt19937 rng(200 + seed);
    const PixelImage x0 = RandomImage(24, 24, 3, rng, -20, 275);
    const PixelImage other = RandomImage(24, 24, 3, rng);
    const PixelImage x = RandomImage(24, 24, 3, rng, -20, 275);
    const auto mask = RegionMask::FromRect(24, 24, {2, 2, 20, 20});
    for (const auto& obj : AllObjectives(x0, other)) {
      if (!obj.signed_value) {
        EXPECT_GE(obj.eval(x, mask).value, 0.0) << obj.name;
      }
    }
  }
}

}  // namespace
}  // namespace ejpeg
