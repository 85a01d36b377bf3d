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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ejpeg/color.h"
#include "ejpeg/error.h"
#include "ejpeg/resample.h"

namespace ejpeg {
namespace {

constexpr int kPatchArea = kPatchSize * kPatchSize;

void CheckMask(const PixelImage& x, const RegionMask& mask) {
  if (mask.width() != x.width() || mask.height() != x.height()) {
    Fail(ErrorCode::kDimensionMismatch, "mask size differs from image size");
  }
  if (!mask.AnyPositive()) {
    Fail(ErrorCode::kInvalidArgument, "mask has no positive weight");
  }
}

void CheckSameShape(const PixelImage& a, const PixelImage& b,
                    const char* what) {
  if (!a.SameShape(b)) {
    Fail(ErrorCode::kDimensionMismatch,
         std::string(what) + " shape differs from the image");
  }
}

std::vector<PatchPosition> RequirePatches(const RegionMask& mask, int stride) {
  auto positions = PatchPositions(mask, stride);
  if (positions.empty()) {
    Fail(ErrorCode::kInvalidArgument, "mask holds no complete 6x6 patch");
  }
  return positions;
}

// Samples of one patch channel, row-major.
std::array<double, kPatchArea> ReadPatch(const Plane& p, PatchPosition pos) {
  std::array<double, kPatchArea> v;
  for (int dy = 0; dy < kPatchSize; ++dy) {
    for (int dx = 0; dx < kPatchSize; ++dx) {
      v[dy * kPatchSize + dx] = p.at(pos.x + dx, pos.y + dy);
    }
  }
  return v;
}

void AddPatch(Plane& p, PatchPosition pos,
              const std::array<double, kPatchArea>& g) {
  for (int dy = 0; dy < kPatchSize; ++dy) {
    for (int dx = 0; dx < kPatchSize; ++dx) {
      p.at(pos.x + dx, pos.y + dy) += g[dy * kPatchSize + dx];
    }
  }
}

double Mean(const std::array<double, kPatchArea>& v) {
  double sum = 0.0;
  for (double e : v) sum += e;
  return sum / kPatchArea;
}

// Centers v in place and returns the population variance.
double CenterPatch(std::array<double, kPatchArea>& v) {
  const double mean = Mean(v);
  double var = 0.0;
  for (double& e : v) {
    e -= mean;
    var += e * e;
  }
  return var / kPatchArea;
}

double Sign(Direction d) { return d == Direction::kIncrease ? 1.0 : -1.0; }

// Normalized patch vector of x at pos plus per-channel centered samples and
// scales, kept for backpropagation.
struct NormalizedPatch {
  std::vector<double> vec;
  std::vector<std::array<double, kPatchArea>> centered;
  std::vector<double> sigma;
};

NormalizedPatch Normalize(const PixelImage& x, PatchPosition pos,
                          bool normalize_variance) {
  NormalizedPatch n;
  n.vec.reserve(static_cast<size_t>(x.channels()) * kPatchArea);
  for (int c = 0; c < x.channels(); ++c) {
    auto v = ReadPatch(x.plane(c), pos);
    const double var = CenterPatch(v);
    const double sigma =
        normalize_variance ? std::sqrt(var + kPatchVarianceFloor) : 1.0;
    for (double e : v) n.vec.push_back(e / sigma);
    n.centered.push_back(v);
    n.sigma.push_back(sigma);
  }
  return n;
}

// Lowest index wins ties.
int Nearest(const std::vector<double>& v, const PatchSet& source,
            double* distance) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < source.patches.size(); ++j) {
    const auto& s = source.patches[j];
    double d = 0.0;
    for (size_t i = 0; i < v.size(); ++i) d += (v[i] - s[i]) * (v[i] - s[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  *distance = best_d;
  return best;
}

void CheckSource(const PixelImage& x, const PatchSet& source) {
  if (source.patches.empty()) {
    Fail(ErrorCode::kInvalidArgument, "source patch set is empty");
  }
  if (source.channels != x.channels()) {
    Fail(ErrorCode::kDimensionMismatch,
         "source patches have a different channel count");
  }
}

std::array<double, 3> RgbToHsv(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  return {h, s, mx};
}

std::array<double, 3> HsvToRgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = v - c;
  return {r + m, g + m, b + m};
}

// Channel weights of the single-channel view fed to a classifier.
std::vector<double> ViewWeights(const PixelImage& x) {
  if (x.channels() == 3) return {kLumaRed, kLumaGreen, kLumaBlue};
  return std::vector<double>(x.channels(), 1.0 / x.channels());
}

Plane ClassifierCrop(const PixelImage& x, const RegionMask& mask,
                     const ClassifierHook& hook, Rect* support) {
  CheckMask(x, mask);
  *support = mask.Support();
  const auto w = ViewWeights(x);
  Plane crop(support->width, support->height);
  for (int y = 0; y < support->height; ++y) {
    for (int xx = 0; xx < support->width; ++xx) {
      const int px = support->x + xx;
      const int py = support->y + y;
      double v = 0.0;
      for (int c = 0; c < x.channels(); ++c) v += w[c] * x.at(c, px, py);
      crop.at(xx, y) = mask.at(px, py) * v;
    }
  }
  return ResizeBilinear(crop, hook.input_width(), hook.input_height());
}

}  // namespace

double SmoothAbs(double d) {
  return std::sqrt(d * d + kSmoothAbsEpsilon * kSmoothAbsEpsilon) -
         kSmoothAbsEpsilon;
}

double SmoothAbsDerivative(double d) {
  return d / std::sqrt(d * d + kSmoothAbsEpsilon * kSmoothAbsEpsilon);
}

std::vector<PatchPosition> PatchPositions(const RegionMask& mask, int stride) {
  if (stride < 1) Fail(ErrorCode::kInvalidArgument, "patch stride must be >= 1");
  std::vector<PatchPosition> out;
  const Rect s = mask.Support();
  if (s.empty()) return out;
  for (int y = s.y; y + kPatchSize <= s.y + s.height; y += stride) {
    for (int x = s.x; x + kPatchSize <= s.x + s.width; x += stride) {
      bool inside = true;
      for (int dy = 0; dy < kPatchSize && inside; ++dy) {
        for (int dx = 0; dx < kPatchSize && inside; ++dx) {
          inside = mask.Selected(x + dx, y + dy);
        }
      }
      if (inside) out.push_back({x, y});
    }
  }
  return out;
}

PatchSet ExtractPatches(const PixelImage& image, const RegionMask& mask,
                        int stride, bool normalize_variance) {
  CheckMask(image, mask);
  PatchSet set;
  set.channels = image.channels();
  set.stride = stride;
  set.normalize_variance = normalize_variance;
  set.positions = RequirePatches(mask, stride);
  for (const auto& pos : set.positions) {
    set.patches.push_back(Normalize(image, pos, normalize_variance).vec);
  }
  return set;
}

ObjectiveValue EvalVariance(const PixelImage& x, const PixelImage& x0,
                            const RegionMask& mask, double delta,
                            Direction direction, VarianceMode mode) {
  CheckMask(x, mask);
  CheckSameShape(x, x0, "reference image");
  if (!(delta >= 0.0)) Fail(ErrorCode::kInvalidArgument, "delta must be >= 0");
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (const auto& pos : RequirePatches(mask, kVarianceStride)) {
    for (int c = 0; c < x.channels(); ++c) {
      auto v = ReadPatch(x.plane(c), pos);
      const double var = CenterPatch(v);
      double target = delta;
      if (mode == VarianceMode::kRelative) {
        auto v0 = ReadPatch(x0.plane(c), pos);
        target = CenterPatch(v0) + Sign(direction) * delta;
      }
      const double r = var - target;
      out.value += r * r;
      std::array<double, kPatchArea> g;
      for (int i = 0; i < kPatchArea; ++i) g[i] = 2.0 * r * 2.0 * v[i] / kPatchArea;
      AddPatch(out.gradient.plane(c), pos, g);
    }
  }
  return out;
}

ObjectiveValue EvalTv(const PixelImage& x, const RegionMask& mask) {
  CheckMask(x, mask);
  static constexpr int kOffsets[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      const double mp = mask.at(xx, y);
      if (mp <= 0.0) continue;
      for (const auto& o : kOffsets) {
        const int qx = xx + o[0];
        const int qy = y + o[1];
        if (qx < 0 || qy < 0 || qx >= x.width() || qy >= x.height()) continue;
        const double w = mp * mask.at(qx, qy);
        if (w <= 0.0) continue;
        for (int c = 0; c < x.channels(); ++c) {
          const double d = x.at(c, xx, y) - x.at(c, qx, qy);
          out.value += w * SmoothAbs(d);
          const double g = w * SmoothAbsDerivative(d);
          out.gradient.at(c, xx, y) += g;
          out.gradient.at(c, qx, qy) -= g;
        }
      }
    }
  }
  return out;
}

ObjectiveValue EvalL1Target(const PixelImage& x, const PixelImage& target,
                            const RegionMask& mask) {
  CheckMask(x, mask);
  CheckSameShape(x, target, "target image");
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        const double m = mask.at(xx, y);
        if (m <= 0.0) continue;
        const double d = x.at(c, xx, y) - target.at(c, xx, y);
        out.value += m * SmoothAbs(d);
        out.gradient.at(c, xx, y) = m * SmoothAbsDerivative(d);
      }
    }
  }
  return out;
}

ObjectiveValue EvalMagnitude(const PixelImage& x, const PixelImage& x0,
                             const RegionMask& mask, double delta,
                             Direction direction) {
  CheckMask(x, mask);
  CheckSameShape(x, x0, "reference image");
  if (!(delta >= 0.0)) Fail(ErrorCode::kInvalidArgument, "delta must be >= 0");
  const double factor = 1.0 + Sign(direction) * delta;
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (const auto& pos : RequirePatches(mask, kMagnitudeStride)) {
    for (int c = 0; c < x.channels(); ++c) {
      auto v = ReadPatch(x.plane(c), pos);
      auto v0 = ReadPatch(x0.plane(c), pos);
      CenterPatch(v);
      CenterPatch(v0);
      // The residual is zero-mean, so the centering adjoint leaves it as is.
      std::array<double, kPatchArea> g;
      for (int i = 0; i < kPatchArea; ++i) {
        const double r = v[i] - factor * v0[i];
        out.value += r * r;
        g[i] = 2.0 * r;
      }
      AddPatch(out.gradient.plane(c), pos, g);
    }
  }
  return out;
}

std::vector<int> PatchDictAssignment(const PixelImage& x,
                                     const PatchSet& source,
                                     const RegionMask& target_mask) {
  CheckMask(x, target_mask);
  CheckSource(x, source);
  std::vector<int> out;
  for (const auto& pos : RequirePatches(target_mask, kTargetPatchStride)) {
    double d;
    out.push_back(Nearest(Normalize(x, pos, source.normalize_variance).vec,
                          source, &d));
  }
  return out;
}

ObjectiveValue EvalPatchDict(const PixelImage& x, const PixelImage& x0,
                             const PatchSet& source,
                             const RegionMask& target_mask) {
  CheckMask(x, target_mask);
  CheckSameShape(x, x0, "reference image");
  CheckSource(x, source);
  const bool normalize = source.normalize_variance;
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (const auto& pos : RequirePatches(target_mask, kTargetPatchStride)) {
    const NormalizedPatch n = Normalize(x, pos, normalize);
    double distance;
    const auto& s = source.patches[Nearest(n.vec, source, &distance)];
    out.value += distance;
    for (int c = 0; c < x.channels(); ++c) {
      const size_t base = static_cast<size_t>(c) * kPatchArea;
      const auto& cen = n.centered[c];
      const double sigma = n.sigma[c];
      std::array<double, kPatchArea> g;
      for (int i = 0; i < kPatchArea; ++i) g[i] = 2.0 * (n.vec[base + i] - s[base + i]);
      if (normalize) {
        // d(c / sigma): g / sigma - c (c . g) / (36 sigma^3); both terms are
        // zero-mean so the centering adjoint is the identity.
        double cg = 0.0;
        for (int i = 0; i < kPatchArea; ++i) cg += cen[i] * g[i];
        const double k = cg / (kPatchArea * sigma * sigma * sigma);
        auto v0 = ReadPatch(x0.plane(c), pos);
        const double sigma0 = std::sqrt(CenterPatch(v0) + kPatchVarianceFloor);
        const double dsig = sigma - sigma0;
        out.value += kVariancePreservationWeight * dsig * dsig;
        const double kp =
            2.0 * kVariancePreservationWeight * dsig / (kPatchArea * sigma);
        for (int i = 0; i < kPatchArea; ++i) {
          g[i] = g[i] / sigma - k * cen[i] + kp * cen[i];
        }
      }
      AddPatch(out.gradient.plane(c), pos, g);
    }
  }
  return out;
}

ObjectiveValue EvalPeriodicity(const PixelImage& x, const RegionMask& mask,
                               const std::vector<PeriodVector>& directions) {
  CheckMask(x, mask);
  if (directions.empty() || directions.size() > 2) {
    Fail(ErrorCode::kInvalidArgument, "periodicity takes 1 or 2 period vectors");
  }
  const Rect s = mask.Support();
  for (const auto& v : directions) {
    if (v.dx == 0 && v.dy == 0) {
      Fail(ErrorCode::kInvalidArgument, "period vector must be nonzero");
    }
    if (std::abs(v.dx) >= s.width || std::abs(v.dy) >= s.height) {
      Fail(ErrorCode::kInvalidArgument, "period vector larger than the region");
    }
  }
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (const auto& v : directions) {
    for (int y = s.y; y < s.y + s.height; ++y) {
      for (int xx = s.x; xx < s.x + s.width; ++xx) {
        const int qx = xx + v.dx;
        const int qy = y + v.dy;
        if (qx < 0 || qy < 0 || qx >= x.width() || qy >= x.height()) continue;
        const double w = mask.at(xx, y) * mask.at(qx, qy);
        if (w <= 0.0) continue;
        for (int c = 0; c < x.channels(); ++c) {
          const double d = x.at(c, xx, y) - x.at(c, qx, qy);
          out.value += w * d * d;
          out.gradient.at(c, xx, y) += 2.0 * w * d;
          out.gradient.at(c, qx, qy) -= 2.0 * w * d;
        }
      }
    }
  }
  return out;
}

PeriodEstimate AutoPeriod(const PixelImage& x, const RegionMask& mask,
                          Axis axis) {
  CheckMask(x, mask);
  const Rect s = mask.Support();
  const int extent = axis == Axis::kHorizontal ? s.width : s.height;
  if (extent < 2 * kMinPeriod) {
    Fail(ErrorCode::kInvalidArgument, "region too small to estimate a period");
  }
  const int max_lag = extent / 2;
  auto value = [&](int px, int py) {
    double v = 0.0;
    for (int c = 0; c < x.channels(); ++c) v += x.at(c, px, py);
    return v / x.channels();
  };
  // Pearson correlation between the region and its shift by lag.
  auto correlation = [&](int lag) {
    const int dx = axis == Axis::kHorizontal ? lag : 0;
    const int dy = axis == Axis::kVertical ? lag : 0;
    double n = 0, sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int y = s.y; y + dy < s.y + s.height; ++y) {
      for (int xx = s.x; xx + dx < s.x + s.width; ++xx) {
        if (!mask.Selected(xx, y) || !mask.Selected(xx + dx, y + dy)) continue;
        const double a = value(xx, y);
        const double b = value(xx + dx, y + dy);
        n += 1;
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
      }
    }
    if (n < 2) return 0.0;
    const double cov = sab - sa * sb / n;
    const double va = saa - sa * sa / n;
    const double vb = sbb - sb * sb / n;
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
  };
  const int last = std::min(max_lag + 1, extent - 1);
  std::vector<double> r(last + 1, 0.0);
  for (int lag = kMinPeriod - 1; lag <= last; ++lag) r[lag] = correlation(lag);

  PeriodEstimate best{kMinPeriod, r[kMinPeriod], false};
  for (int lag = kMinPeriod; lag <= max_lag; ++lag) {
    const bool peak = r[lag] >= r[lag - 1] && (lag + 1 > last || r[lag] >= r[lag + 1]);
    if (peak && r[lag] >= kPeriodPeakAccept) {
      best = {lag, r[lag], false};
      best.low_confidence = best.correlation < kPeriodLowConfidence;
      return best;
    }
    if (r[lag] > best.correlation) best = {lag, r[lag], false};
  }
  best.low_confidence = best.correlation < kPeriodLowConfidence;
  return best;
}

DiversityValue EvalDiversity(const std::vector<PixelImage>& outputs,
                             const PixelImage& x0, const RegionMask& mask,
                             double proximity) {
  if (outputs.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "diversity needs at least 2 outputs");
  }
  if (!(proximity >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "proximity weight must be >= 0");
  }
  CheckMask(x0, mask);
  for (const auto& o : outputs) CheckSameShape(o, x0, "output");
  DiversityValue out;
  for (size_t i = 0; i < outputs.size(); ++i) {
    out.gradients.emplace_back(x0.width(), x0.height(), x0.channels());
  }
  for (int c = 0; c < x0.channels(); ++c) {
    for (int y = 0; y < x0.height(); ++y) {
      for (int xx = 0; xx < x0.width(); ++xx) {
        const double m = mask.at(xx, y);
        if (m <= 0.0) continue;
        for (size_t i = 0; i < outputs.size(); ++i) {
          const double xi = outputs[i].at(c, xx, y);
          for (size_t j = i + 1; j < outputs.size(); ++j) {
            const double d = xi - outputs[j].at(c, xx, y);
            out.value -= m * SmoothAbs(d);
            const double g = m * SmoothAbsDerivative(d);
            out.gradients[i].at(c, xx, y) -= g;
            out.gradients[j].at(c, xx, y) += g;
          }
          if (proximity > 0.0) {
            const double d = xi - x0.at(c, xx, y);
            out.value += proximity * m * SmoothAbs(d);
            out.gradients[i].at(c, xx, y) += proximity * m * SmoothAbsDerivative(d);
          }
        }
      }
    }
  }
  return out;
}

ObjectiveValue EvalRange(const PixelImage& x, const RegionMask& mask,
                         double lo, double hi) {
  if (!(lo < hi)) Fail(ErrorCode::kInvalidArgument, "range needs lo < hi");
  if (mask.width() != x.width() || mask.height() != x.height()) {
    Fail(ErrorCode::kDimensionMismatch, "mask size differs from image size");
  }
  const double k = static_cast<double>(x.width()) * x.height() * x.channels();
  ObjectiveValue out{0.0, PixelImage(x.width(), x.height(), x.channels())};
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        const double m = mask.at(xx, y);
        const double v = x.at(c, xx, y);
        const double e = v > hi ? v - hi : (v < lo ? v - lo : 0.0);
        if (m <= 0.0 || e == 0.0) continue;
        out.value += m * SmoothAbs(e) / k;
        out.gradient.at(c, xx, y) = m * SmoothAbsDerivative(e) / k;
      }
    }
  }
  return out;
}

const char* HsvAttributeName(HsvAttribute attribute) {
  switch (attribute) {
    case HsvAttribute::kHue:
      return "hue";
    case HsvAttribute::kSaturation:
      return "saturation";
    case HsvAttribute::kValue:
      return "value";
  }
  return "?";
}

HsvAttribute ParseHsvAttribute(const std::string& text) {
  if (text == "hue") return HsvAttribute::kHue;
  if (text == "saturation" || text == "sat") return HsvAttribute::kSaturation;
  if (text == "value") return HsvAttribute::kValue;
  Fail(ErrorCode::kInvalidArgument, "unknown HSV attribute '" + text + "'");
}

PixelImage BuildHsvTarget(const PixelImage& x, const RegionMask& mask,
                          HsvAttribute attribute, double amount) {
  if (x.channels() != 3) {
    Fail(ErrorCode::kInvalidArgument, "HSV editing needs a color image");
  }
  CheckMask(x, mask);
  if (!std::isfinite(amount)) Fail(ErrorCode::kInvalidArgument, "amount must be finite");
  PixelImage out = x;
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      const double m = mask.at(xx, y);
      if (m <= 0.0) continue;
      auto unit = [&](int c) { return std::clamp(x.at(c, xx, y) / 255.0, 0.0, 1.0); };
      auto hsv = RgbToHsv(unit(0), unit(1), unit(2));
      switch (attribute) {
        case HsvAttribute::kHue:
          hsv[0] = std::fmod(std::fmod(hsv[0] + amount, 360.0) + 360.0, 360.0);
          break;
        case HsvAttribute::kSaturation:
          hsv[1] = std::clamp(hsv[1] * (1.0 + amount), 0.0, 1.0);
          break;
        case HsvAttribute::kValue:
          hsv[2] = std::clamp(hsv[2] * (1.0 + amount), 0.0, 1.0);
          break;
      }
      const auto rgb = HsvToRgb(hsv[0], hsv[1], hsv[2]);
      for (int c = 0; c < 3; ++c) {
        out.at(c, xx, y) = m * 255.0 * rgb[c] + (1.0 - m) * x.at(c, xx, y);
      }
    }
  }
  return out;
}

std::vector<double> ClassifierScores(const PixelImage& x,
                                     const RegionMask& mask,
                                     const ClassifierHook& hook) {
  Rect support;
  return hook.Scores(ClassifierCrop(x, mask, hook, &support));
}

ObjectiveValue EvalClassifier(const PixelImage& x, const RegionMask& mask,
                              const ClassifierHook& hook, int cls) {
  if (cls < 0 || cls >= hook.class_count()) {
    Fail(ErrorCode::kInvalidArgument, "class index out of range");
  }
  Rect s;
  const Plane crop = ClassifierCrop(x, mask, hook, &s);
  ObjectiveValue out{-hook.Scores(crop)[cls],
                     PixelImage(x.width(), x.height(), x.channels())};
  const Plane g =
      ResizeBilinearAdjoint(hook.ScoreGradient(crop, cls), s.width, s.height);
  const auto w = ViewWeights(x);
  for (int y = 0; y < s.height; ++y) {
    for (int xx = 0; xx < s.width; ++xx) {
      const int px = s.x + xx;
      const int py = s.y + y;
      const double gm = -g.at(xx, y) * mask.at(px, py);
      for (int c = 0; c < x.channels(); ++c) out.gradient.at(c, px, py) = gm * w[c];
    }
  }
  return out;
}

}  // namespace ejpeg
