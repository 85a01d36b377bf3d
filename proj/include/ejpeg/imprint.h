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

#ifndef EJPEG_IMPRINT_H_
#define EJPEG_IMPRINT_H_

#include <array>

#include "ejpeg/compressed_image.h"
#include "ejpeg/consistency.h"
#include "ejpeg/image.h"

namespace ejpeg {

// Offset search range per axis: [0, 8).
constexpr int kImprintShiftRange = 8;

struct ShiftSearchResult {
  int dx = 0;
  int dy = 0;
  double residual = 0.0;
  // residuals[dy * 8 + dx]
  std::array<double, kImprintShiftRange * kImprintShiftRange> residuals{};
};

// content pasted over base with its top-left corner at (x, y); pixels that
// fall outside base are dropped.
PixelImage PasteContent(const PixelImage& base, const PixelImage& content,
                        int x, int y);

// For every shift (dx, dy) in [0, 8)^2: paste content at target.x + dx,
// target.y + dy, project, and take the L2 norm of desired - projected.
// Returns the smallest residual (ties: smallest dy, then dx). target must lie
// inside the image and have the content's size.
ShiftSearchResult ImprintShiftSearch(const PixelImage& base,
                                     const PixelImage& content,
                                     const CompressedImage& code,
                                     const Rect& target);

struct ImprintTransform {
  int dx = 0;
  int dy = 0;
  double scale = 1.0;
  double rotation_degrees = 0.0;  // counter-clockwise on screen
};

struct ImprintSpec {
  PixelImage content;
  Rect target;  // placement before the transform; size of content
  ImprintTransform transform;
};

struct ImprintPreview {
  PixelImage desired;        // composite before projection
  ConsistentImage projected;
  double residual = 0.0;     // L2 norm of desired - projected
};

// Scales and rotates content about its center with bilinear sampling,
// translates it by (dx, dy), alpha-composites it onto base and projects onto
// the code's consistent set. Throws kInvalidArgument when the transformed
// content leaves the image.
ImprintPreview ApplyImprint(const PixelImage& base, const CompressedImage& code,
                            const ImprintSpec& spec);

}  // namespace ejpeg

#endif  // EJPEG_IMPRINT_H_
