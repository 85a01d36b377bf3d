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

#ifndef EJPEG_IMAGE_H_
#define EJPEG_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ejpeg {

// Real-valued single channel raster, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return values_.size(); }

  double& at(int x, int y) { return values_[Index(x, y)]; }
  double at(int x, int y) const { return values_[Index(x, y)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  // Pads to (width, height) >= current size by replicating the last row and
  // column.
  Plane EdgeExtended(int width, int height) const;
  Plane Cropped(int x0, int y0, int width, int height) const;

  bool operator==(const Plane&) const = default;

 private:
  size_t Index(int x, int y) const {
    return static_cast<size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Planar image with 1 (gray) or 3 (RGB) channels. Samples are nominally in
// [0, 255] but are not clamped; DCT-exact reconstructions may leave the range.
class PixelImage {
 public:
  PixelImage() = default;
  PixelImage(int width, int height, int channels, double fill = 0.0);
  explicit PixelImage(std::vector<Plane> planes);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  bool empty() const { return planes_.empty(); }

  Plane& plane(int c) { return planes_[c]; }
  const Plane& plane(int c) const { return planes_[c]; }

  double& at(int c, int x, int y) { return planes_[c].at(x, y); }
  double at(int c, int x, int y) const { return planes_[c].at(x, y); }

  bool SameShape(const PixelImage& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels() == other.channels();
  }

  // Copy with every sample rounded half away from zero and clamped to
  // [0, 255].
  PixelImage Quantized8() const;
  PixelImage Clamped(double lo = 0.0, double hi = 255.0) const;
  PixelImage Cropped(int x0, int y0, int width, int height) const;

  bool operator==(const PixelImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Plane> planes_;
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool empty() const { return width <= 0 || height <= 0; }
  bool Contains(int px, int py) const {
    return px >= x && py >= y && px < x + width && py < y + height;
  }
  bool operator==(const Rect&) const = default;
};

// Per-pixel edit weights in [0, 1].
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(int width, int height, double fill = 0.0);

  static RegionMask Full(int width, int height) {
    return RegionMask(width, height, 1.0);
  }
  static RegionMask FromRect(int width, int height, const Rect& rect);

  int width() const { return weights_.width(); }
  int height() const { return weights_.height(); }

  double at(int x, int y) const { return weights_.at(x, y); }
  double& at(int x, int y) { return weights_.at(x, y); }
  bool Selected(int x, int y) const { return weights_.at(x, y) > 0.0; }

  bool AnyPositive() const;
  // Bounding box of all pixels with positive weight; empty Rect when none.
  Rect Support() const;

  const Plane& weights() const { return weights_; }

 private:
  Plane weights_;
};

double Mse(const PixelImage& a, const PixelImage& b);
// Peak signal to noise ratio over all samples, peak 255. +inf for identical
// inputs.
double Psnr(const PixelImage& a, const PixelImage& b);
double MaxAbsDifference(const PixelImage& a, const PixelImage& b);

}  // namespace ejpeg

#endif  // EJPEG_IMAGE_H_
