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

#ifndef EJPEG_SRC_BLOCK_TRANSFORM_H_
#define EJPEG_SRC_BLOCK_TRANSFORM_H_

#include <span>
#include <vector>

#include "ejpeg/compressed_image.h"
#include "ejpeg/image.h"

namespace ejpeg::internal {

// How a plane's 8x8 coefficient blocks map to pixels.
enum class BlockModel {
  kDirect8,       // IDCT8 over an 8x8 footprint
  kLowpass16,     // zero-padded into the 16x16 low-frequency quadrant
};

BlockModel ModelFor(const CompressedImage& code, int plane);

// Coefficients (blocks of 64, natural order) -> level-shifted pixels covering
// cols x rows blocks of the model's footprint.
Plane BlocksToPixels(std::span<const double> coeffs, int rows, int cols,
                     BlockModel model);

// Inverse of BlocksToPixels for the plane's footprint. For kLowpass16 only
// the low-frequency quadrant survives.
std::vector<double> PixelsToBlocks(const Plane& pixels, int rows, int cols,
                                   BlockModel model);

// Adjoint of BlocksToPixels (without the level shift): maps a pixel-space
// gradient onto coefficient space.
std::vector<double> PixelGradientToBlocks(const Plane& gradient, int rows,
                                          int cols, BlockModel model);

// Gray -> {Y}, RGB -> {Y, Cb, Cr}.
std::vector<Plane> ToComponents(const PixelImage& image);
PixelImage FromComponents(std::vector<Plane> components);

// 2x2 box average; input dimensions must be even.
Plane BoxDownsample2(const Plane& plane);
Plane NearestUpsample2(const Plane& plane);

}  // namespace ejpeg::internal

#endif  // EJPEG_SRC_BLOCK_TRANSFORM_H_
