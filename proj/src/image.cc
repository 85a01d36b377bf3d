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

#include "ejpeg/image.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ejpeg/error.h"

namespace ejpeg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kUnsupportedFormat:
      return "unsupported-format";
    case ErrorCode::kParseError:
      return "parse-error";
    case ErrorCode::kNotFound:
      return "not-found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    Fail(ErrorCode::kInvalidArgument, "negative plane dimensions");
  }
  values_.assign(static_cast<size_t>(width) * height, fill);
}

Plane Plane::EdgeExtended(int width, int height) const {
  if (width < width_ || height < height_ || width_ == 0 || height_ == 0) {
    Fail(ErrorCode::kDimensionMismatch, "cannot edge-extend plane");
  }
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(y, height_ - 1);
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = at(std::min(x, width_ - 1), sy);
    }
  }
  return out;
}

Plane Plane::Cropped(int x0, int y0, int width, int height) const {
  if (x0 < 0 || y0 < 0 || x0 + width > width_ || y0 + height > height_) {
    Fail(ErrorCode::kDimensionMismatch, "crop outside plane");
  }
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = at(x0 + x, y0 + y);
  }
  return out;
}

PixelImage::PixelImage(int width, int height, int channels, double fill)
    : width_(width), height_(height) {
  if (channels != 1 && channels != 3) {
    Fail(ErrorCode::kInvalidArgument, "images have 1 or 3 channels");
  }
  planes_.assign(channels, Plane(width, height, fill));
}

PixelImage::PixelImage(std::vector<Plane> planes) : planes_(std::move(planes)) {
  if (planes_.size() != 1 && planes_.size() != 3) {
    Fail(ErrorCode::kInvalidArgument, "images have 1 or 3 channels");
  }
  width_ = planes_[0].width();
  height_ = planes_[0].height();
  for (const Plane& p : planes_) {
    if (p.width() != width_ || p.height() != height_) {
      Fail(ErrorCode::kDimensionMismatch, "channel planes differ in size");
    }
  }
}

PixelImage PixelImage::Quantized8() const {
  PixelImage out = *this;
  for (Plane& p : out.planes_) {
    for (double& v : p.values()) v = std::clamp(std::round(v), 0.0, 255.0);
  }
  return out;
}

PixelImage PixelImage::Clamped(double lo, double hi) const {
  PixelImage out = *this;
  for (Plane& p : out.planes_) {
    for (double& v : p.values()) v = std::clamp(v, lo, hi);
  }
  return out;
}

PixelImage PixelImage::Cropped(int x0, int y0, int width, int height) const {
  std::vector<Plane> planes;
  for (const Plane& p : planes_) {
    planes.push_back(p.Cropped(x0, y0, width, height));
  }
  return PixelImage(std::move(planes));
}

RegionMask::RegionMask(int width, int height, double fill)
    : weights_(width, height, fill) {}

RegionMask RegionMask::FromRect(int width, int height, const Rect& rect) {
  RegionMask mask(width, height);
  for (int y = std::max(rect.y, 0); y < std::min(rect.y + rect.height, height);
       ++y) {
    for (int x = std::max(rect.x, 0); x < std::min(rect.x + rect.width, width);
         ++x) {
      mask.at(x, y) = 1.0;
    }
  }
  return mask;
}

bool RegionMask::AnyPositive() const {
  return std::any_of(weights_.values().begin(), weights_.values().end(),
                     [](double w) { return w > 0.0; });
}

Rect RegionMask::Support() const {
  int x0 = width(), y0 = height(), x1 = -1, y1 = -1;
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      if (!Selected(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return Rect{};
  return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

double Mse(const PixelImage& a, const PixelImage& b) {
  if (!a.SameShape(b)) {
    Fail(ErrorCode::kDimensionMismatch, "MSE of differently shaped images");
  }
  double sum = 0.0;
  size_t n = 0;
  for (int c = 0; c < a.channels(); ++c) {
    auto va = a.plane(c).values();
    auto vb = b.plane(c).values();
    for (size_t i = 0; i < va.size(); ++i) {
      const double d = va[i] - vb[i];
      sum += d * d;
    }
    n += va.size();
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double Psnr(const PixelImage& a, const PixelImage& b) {
  const double mse = Mse(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double MaxAbsDifference(const PixelImage& a, const PixelImage& b) {
  if (!a.SameShape(b)) {
    Fail(ErrorCode::kDimensionMismatch, "difference of differently shaped images");
  }
  double m = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    auto va = a.plane(c).values();
    auto vb = b.plane(c).values();
    for (size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  }
  return m;
}

}  // namespace ejpeg
