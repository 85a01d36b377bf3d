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

#ifndef EJPEG_COLOR_H_
#define EJPEG_COLOR_H_

#include <array>

#include "ejpeg/image.h"

namespace ejpeg {

// Full-range JFIF (BT.601) luma weights.
constexpr double kLumaRed = 0.299;
constexpr double kLumaGreen = 0.587;
constexpr double kLumaBlue = 0.114;

// Forward and inverse are exact algebraic inverses (not the rounded 6-digit
// constants), so DCT-domain checks survive a pixel-space round trip.
std::array<double, 3> RgbToYcbcr(double r, double g, double b);
std::array<double, 3> YcbcrToRgb(double y, double cb, double cr);

// Linear part of YcbcrToRgb: rgb = kYcbcrToRgb * (y, cb - 128, cr - 128).
extern const std::array<std::array<double, 3>, 3> kYcbcrToRgbMatrix;

// Throw kInvalidArgument unless the image has 3 channels.
PixelImage RgbToYcbcr(const PixelImage& rgb);
PixelImage YcbcrToRgb(const PixelImage& ycbcr);

double Luma(double r, double g, double b);

}  // namespace ejpeg

#endif  // EJPEG_COLOR_H_
