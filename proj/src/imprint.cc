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

#include "ejpeg/imprint.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ejpeg/error.h"
#include "ejpeg/resample.h"

namespace ejpeg {
namespace {

void CheckInputs(const PixelImage& base, const PixelImage& content,
                 const CompressedImage& code, const Rect& target) {
  if (base.width() != code.width || base.height() != code.height) {
    Fail(ErrorCode::kDimensionMismatch, "base image does not match the code");
  }
  if (content.empty() || content.channels() != base.channels()) {
    Fail(ErrorCode::kDimensionMismatch, "content channel count differs from the image");
  }
  if (target.width != content.width() || target.height != content.height()) {
    Fail(ErrorCode::kDimensionMismatch, "target rectangle must have the content size");
  }
  if (target.empty() || target.x < 0 || target.y < 0 ||
      target.x + target.width > base.width() ||
      target.y + target.height > base.height()) {
    Fail(ErrorCode::kInvalidArgument, "target rectangle lies outside the image");
  }
}

double L2(const PixelImage& a, const PixelImage& b) {
  return std::sqrt(Mse(a, b) * a.width() * a.height() * a.channels());
}

}  // namespace

PixelImage PasteContent(const PixelImage& base, const PixelImage& content,
                        int x, int y) {
  PixelImage out = base;
  for (int c = 0; c < base.channels(); ++c) {
    for (int yy = 0; yy < content.height(); ++yy) {
      for (int xx = 0; xx < content.width(); ++xx) {
        const int px = x + xx, py = y + yy;
        if (px < 0 || py < 0 || px >= base.width() || py >= base.height()) continue;
        out.at(c, px, py) = content.at(c, xx, yy);
      }
    }
  }
  return out;
}

ShiftSearchResult ImprintShiftSearch(const PixelImage& base,
                                     const PixelImage& content,
                                     const CompressedImage& code,
                                     const Rect& target) {
  CheckInputs(base, content, code, target);
  ShiftSearchResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int dy = 0; dy < kImprintShiftRange; ++dy) {
    for (int dx = 0; dx < kImprintShiftRange; ++dx) {
      const PixelImage desired =
          PasteContent(base, content, target.x + dx, target.y + dy);
      const double r = L2(desired, ProjectToConsistent(desired, code).pixels);
      best.residuals[dy * kImprintShiftRange + dx] = r;
      if (r < best.residual) {
        best.residual = r;
        best.dx = dx;
        best.dy = dy;
      }
    }
  }
  return best;
}

ImprintPreview ApplyImprint(const PixelImage& base, const CompressedImage& code,
                            const ImprintSpec& spec) {
  CheckInputs(base, spec.content, code, spec.target);
  const ImprintTransform& t = spec.transform;
  if (!(t.scale > 0.0) || !std::isfinite(t.scale) || !std::isfinite(t.rotation_degrees)) {
    Fail(ErrorCode::kInvalidArgument, "scale must be > 0 and angles finite");
  }
  const double w = spec.content.width(), h = spec.content.height();
  // Centers in continuous coordinates (pixel i spans [i, i + 1)).
  const double scx = w / 2, scy = h / 2;
  const double dcx = spec.target.x + t.dx + scx;
  const double dcy = spec.target.y + t.dy + scy;
  const double theta = t.rotation_degrees * std::numbers::pi / 180.0;
  // Screen y points down, so a counter-clockwise turn uses -theta.
  const double cs = std::cos(theta), sn = -std::sin(theta);

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (auto [cx, cy] : {std::pair{0.0, 0.0}, {w, 0.0}, {0.0, h}, {w, h}}) {
    const double ux = (cx - scx) * t.scale, uy = (cy - scy) * t.scale;
    const double px = dcx + cs * ux - sn * uy;
    const double py = dcy + sn * ux + cs * uy;
    min_x = std::min(min_x, px), max_x = std::max(max_x, px);
    min_y = std::min(min_y, py), max_y = std::max(max_y, py);
  }
  constexpr double kSlack = 1e-9;
  if (min_x < -kSlack || min_y < -kSlack || max_x > base.width() + kSlack ||
      max_y > base.height() + kSlack) {
    Fail(ErrorCode::kInvalidArgument, "transformed content leaves the image");
  }

  ImprintPreview out;
  out.desired = base;
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x)) - 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y)) - 1);
  const int x1 = std::min(base.width(), static_cast<int>(std::ceil(max_x)) + 1);
  const int y1 = std::min(base.height(), static_cast<int>(std::ceil(max_y)) + 1);
  for (int py = y0; py < y1; ++py) {
    for (int px = x0; px < x1; ++px) {
      // Inverse map of the pixel center into content coordinates.
      const double vx = px + 0.5 - dcx, vy = py + 0.5 - dcy;
      const double ux = (cs * vx + sn * vy) / t.scale;
      const double uy = (-sn * vx + cs * vy) / t.scale;
      const double sx = ux + scx - 0.5, sy = uy + scy - 0.5;
      for (int c = 0; c < base.channels(); ++c) {
        double coverage = 0.0;
        const double v = SampleBilinear(spec.content.plane(c), sx, sy, &coverage);
        if (coverage <= 0.0) continue;
        out.desired.at(c, px, py) = v + (1.0 - coverage) * base.at(c, px, py);
      }
    }
  }
  out.projected = ProjectToConsistent(out.desired, code);
  out.residual = L2(out.desired, out.projected.pixels);
  return out;
}

}  // namespace ejpeg
