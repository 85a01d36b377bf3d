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

#ifndef EJPEG_OBJECTIVES_H_
#define EJPEG_OBJECTIVES_H_

#include <string>
#include <vector>

#include "ejpeg/classifier.h"
#include "ejpeg/image.h"

namespace ejpeg {

// Objective value and its gradient with respect to every pixel sample.
struct ObjectiveValue {
  double value = 0.0;
  PixelImage gradient;
};

// Smoothing constant for every absolute value, in gray levels.
constexpr double kSmoothAbsEpsilon = 1e-3;
// sqrt(d^2 + eps^2) - eps: zero at d = 0, within eps of |d| everywhere.
double SmoothAbs(double d);
double SmoothAbsDerivative(double d);

enum class Direction { kIncrease, kDecrease };
enum class VarianceMode {
  kRelative,  // (Var(P(x)) - Var(P(x0)) -+ delta)^2
  kAbsolute,  // (Var(P(x)) - delta)^2
};

constexpr int kPatchSize = 6;
constexpr int kVarianceStride = 1;
constexpr int kMagnitudeStride = 4;
constexpr int kSourcePatchStride = 2;
constexpr int kTargetPatchStride = 4;

// Top-left corners of 6x6 patches whose pixels all have positive mask
// weight, on a grid of the given stride anchored at the mask support origin.
struct PatchPosition {
  int x = 0;
  int y = 0;
};
std::vector<PatchPosition> PatchPositions(const RegionMask& mask, int stride);

// Mean-removed (and optionally variance-normalized) 6x6 patches, one vector
// of channels * 36 values per patch.
struct PatchSet {
  int channels = 0;
  int stride = 0;
  bool normalize_variance = false;
  std::vector<PatchPosition> positions;
  std::vector<std::vector<double>> patches;
};
// Throws kInvalidArgument when the mask holds no complete patch.
PatchSet ExtractPatches(const PixelImage& image, const RegionMask& mask,
                        int stride, bool normalize_variance);

// Added to the per-channel patch variance before normalizing by its root.
constexpr double kPatchVarianceFloor = 1e-2;
// Weight of the standard-deviation preservation term of the
// variance-normalized patch dictionary.
constexpr double kVariancePreservationWeight = 1.0;

// The evaluators below throw kInvalidArgument for a mask without positive
// weight (except EvalRange) and kDimensionMismatch for mismatched shapes.
ObjectiveValue EvalVariance(const PixelImage& x, const PixelImage& x0,
                            const RegionMask& mask, double delta,
                            Direction direction,
                            VarianceMode mode = VarianceMode::kRelative);
// Forward differences along (1,0), (0,1), (1,1), (1,-1), so each of the
// 8-neighbor pairs counts once, weighted by m_p * m_q.
ObjectiveValue EvalTv(const PixelImage& x, const RegionMask& mask);
ObjectiveValue EvalL1Target(const PixelImage& x, const PixelImage& target,
                            const RegionMask& mask);
ObjectiveValue EvalMagnitude(const PixelImage& x, const PixelImage& x0,
                             const RegionMask& mask, double delta,
                             Direction direction);
// Target patches (stride 4) of x inside target_mask against a fixed source
// dictionary. With source.normalize_variance, x0 supplies the reference
// standard deviation of each target patch for the preservation term.
ObjectiveValue EvalPatchDict(const PixelImage& x, const PixelImage& x0,
                             const PatchSet& source,
                             const RegionMask& target_mask);
// Index of the nearest source patch for each target patch of x (lowest
// index wins ties).
std::vector<int> PatchDictAssignment(const PixelImage& x,
                                     const PatchSet& source,
                                     const RegionMask& target_mask);

struct PeriodVector {
  int dx = 0;
  int dy = 0;
  bool operator==(const PeriodVector&) const = default;
};
ObjectiveValue EvalPeriodicity(const PixelImage& x, const RegionMask& mask,
                               const std::vector<PeriodVector>& directions);

enum class Axis { kHorizontal, kVertical };
struct PeriodEstimate {
  int period = 0;
  double correlation = 0.0;
  bool low_confidence = false;
};
constexpr int kMinPeriod = 3;
// Accepted local correlation peak, and the confidence threshold.
constexpr double kPeriodPeakAccept = 0.5;
constexpr double kPeriodLowConfidence = 0.3;
// Smallest lag in [3, extent / 2] that is a local maximum of the normalized
// autocorrelation with r >= 0.5; otherwise the global maximum. Throws
// kInvalidArgument when the mask support is shorter than 6 along the axis.
PeriodEstimate AutoPeriod(const PixelImage& x, const RegionMask& mask,
                          Axis axis);

struct DiversityValue {
  double value = 0.0;
  std::vector<PixelImage> gradients;
};
// -sum_{i<j} |x_i - x_j|_1 + proximity * sum_i |x_i - x0|_1, masked.
DiversityValue EvalDiversity(const std::vector<PixelImage>& outputs,
                             const PixelImage& x0, const RegionMask& mask,
                             double proximity);

constexpr double kRangeLow = 16.0;
constexpr double kRangeHigh = 235.0;
// Mean over all samples of the masked distance outside [lo, hi].
ObjectiveValue EvalRange(const PixelImage& x, const RegionMask& mask,
                         double lo = kRangeLow, double hi = kRangeHigh);

enum class HsvAttribute { kHue, kSaturation, kValue };
const char* HsvAttributeName(HsvAttribute attribute);
HsvAttribute ParseHsvAttribute(const std::string& text);
// Hue shifts by amount degrees (mod 360); saturation and value scale by
// (1 + amount) and clamp to [0, 1]. The result blends with x by mask weight.
PixelImage BuildHsvTarget(const PixelImage& x, const RegionMask& mask,
                          HsvAttribute attribute, double amount);

// Masked crop over the mask support (gray, or luma of RGB), bilinearly
// resized to the hook input; value = -score[cls].
ObjectiveValue EvalClassifier(const PixelImage& x, const RegionMask& mask,
                              const ClassifierHook& hook, int cls);
// Scores of the same crop.
std::vector<double> ClassifierScores(const PixelImage& x,
                                     const RegionMask& mask,
                                     const ClassifierHook& hook);

}  // namespace ejpeg

#endif  // EJPEG_OBJECTIVES_H_
