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

#include "ejpeg/color.h"

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

constexpr double kCbScale = 2.0 * (1.0 - kLumaBlue);  // 1.772
constexpr double kCrScale = 2.0 * (1.0 - kLumaRed);   // 1.402

PixelImage MapPixels(const PixelImage& in,
                     std::array<double, 3> (*fn)(double, double, double)) {
  if (in.channels() != 3) {
    Fail(ErrorCode::kInvalidArgument,
         "color conversion requires a 3-channel image");
  }
  PixelImage out(in.width(), in.height(), 3);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      const auto v = fn(in.at(0, x, y), in.at(1, x, y), in.at(2, x, y));
      for (int c = 0; c < 3; ++c) out.at(c, x, y) = v[c];
    }
  }
  return out;
}

}  // namespace

const std::array<std::array<double, 3>, 3> kYcbcrToRgbMatrix = {{
    {1.0, 0.0, kCrScale},
    {1.0, -kLumaBlue * kCbScale / kLumaGreen, -kLumaRed * kCrScale / kLumaGreen},
    {1.0, kCbScale, 0.0},
}};

double Luma(double r, double g, double b) {
  return kLumaRed * r + kLumaGreen * g + kLumaBlue * b;
}

std::array<double, 3> RgbToYcbcr(double r, double g, double b) {
  const double y = Luma(r, g, b);
  return {y, (b - y) / kCbScale + 128.0, (r - y) / kCrScale + 128.0};
}

std::array<double, 3> YcbcrToRgb(double y, double cb, double cr) {
  const double db = cb - 128.0;
  const double dr = cr - 128.0;
  const auto& m = kYcbcrToRgbMatrix;
  return {y + m[0][2] * dr, y + m[1][1] * db + m[1][2] * dr, y + m[2][1] * db};
}

PixelImage RgbToYcbcr(const PixelImage& rgb) {
  return MapPixels(rgb, &RgbToYcbcr);
}

PixelImage YcbcrToRgb(const PixelImage& ycbcr) {
  return MapPixels(ycbcr, &YcbcrToRgb);
}

}  // namespace ejpeg
