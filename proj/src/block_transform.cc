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

#include "block_transform.h"

#include "ejpeg/color.h"
#include "ejpeg/dct.h"
#include "ejpeg/error.h"

namespace ejpeg::internal {

BlockModel ModelFor(const CompressedImage& code, int plane) {
  return code.BlockFootprint(plane) == 16 ? BlockModel::kLowpass16
                                          : BlockModel::kDirect8;
}

Plane BlocksToPixels(std::span<const double> coeffs, int rows, int cols,
                     BlockModel model) {
  const int fp = model == BlockModel::kLowpass16 ? 16 : 8;
  Plane out(cols * fp, rows * fp);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Block8 x;
      const size_t base = (static_cast<size_t>(r) * cols + c) * 64;
      for (int k = 0; k < 64; ++k) x[k] = coeffs[base + k];
      if (model == BlockModel::kDirect8) {
        const Block8 px = InverseDct8(x);
        for (int y = 0; y < 8; ++y) {
          for (int xx = 0; xx < 8; ++xx) {
            out.at(c * 8 + xx, r * 8 + y) = px[y * 8 + xx] + 128.0;
          }
        }
      } else {
        const Block16 px = InverseDct16(EmbedLowFrequency(x));
        for (int y = 0; y < 16; ++y) {
          for (int xx = 0; xx < 16; ++xx) {
            out.at(c * 16 + xx, r * 16 + y) = px[y * 16 + xx] + 128.0;
          }
        }
      }
    }
  }
  return out;
}

std::vector<double> PixelsToBlocks(const Plane& pixels, int rows, int cols,
                                   BlockModel model) {
  const int fp = model == BlockModel::kLowpass16 ? 16 : 8;
  if (pixels.width() != cols * fp || pixels.height() != rows * fp) {
    Fail(ErrorCode::kDimensionMismatch, "pixel plane does not cover block grid");
  }
  std::vector<double> out(static_cast<size_t>(rows) * cols * 64);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Block8 x;
      if (model == BlockModel::kDirect8) {
        Block8 px;
        for (int y = 0; y < 8; ++y) {
          for (int xx = 0; xx < 8; ++xx) {
            px[y * 8 + xx] = pixels.at(c * 8 + xx, r * 8 + y) - 128.0;
          }
        }
        x = ForwardDct8(px);
      } else {
        Block16 px;
        for (int y = 0; y < 16; ++y) {
          for (int xx = 0; xx < 16; ++xx) {
            px[y * 16 + xx] = pixels.at(c * 16 + xx, r * 16 + y) - 128.0;
          }
        }
        x = ExtractLowFrequency(ForwardDct16(px));
      }
      const size_t base = (static_cast<size_t>(r) * cols + c) * 64;
      for (int k = 0; k < 64; ++k) out[base + k] = x[k];
    }
  }
  return out;
}

std::vector<double> PixelGradientToBlocks(const Plane& gradient, int rows,
                                          int cols, BlockModel model) {
  const int fp = model == BlockModel::kLowpass16 ? 16 : 8;
  if (gradient.width() != cols * fp || gradient.height() != rows * fp) {
    Fail(ErrorCode::kDimensionMismatch, "gradient plane does not cover grid");
  }
  std::vector<double> out(static_cast<size_t>(rows) * cols * 64);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const size_t base = (static_cast<size_t>(r) * cols + c) * 64;
      if (model == BlockModel::kDirect8) {
        Block8 g;
        for (int y = 0; y < 8; ++y) {
          for (int xx = 0; xx < 8; ++xx) {
            g[y * 8 + xx] = gradient.at(c * 8 + xx, r * 8 + y);
          }
        }
        // The inverse DCT is orthonormal, so its adjoint is the forward DCT.
        const Block8 x = ForwardDct8(g);
        for (int k = 0; k < 64; ++k) out[base + k] = x[k];
      } else {
        Block16 g;
        for (int y = 0; y < 16; ++y) {
          for (int xx = 0; xx < 16; ++xx) {
            g[y * 16 + xx] = gradient.at(c * 16 + xx, r * 16 + y);
          }
        }
        const Block16 x = ForwardDct16(g);
        for (int v = 0; v < 8; ++v) {
          for (int u = 0; u < 8; ++u) {
            out[base + v * 8 + u] = kChromaEmbedScale * x[v * 16 + u];
          }
        }
      }
    }
  }
  return out;
}

std::vector<Plane> ToComponents(const PixelImage& image) {
  if (image.channels() == 1) return {image.plane(0)};
  const PixelImage ycc = RgbToYcbcr(image);
  return {ycc.plane(0), ycc.plane(1), ycc.plane(2)};
}

PixelImage FromComponents(std::vector<Plane> components) {
  if (components.size() == 1) return PixelImage(std::move(components));
  return YcbcrToRgb(PixelImage(std::move(components)));
}

Plane BoxDownsample2(const Plane& plane) {
  if (plane.width() % 2 != 0 || plane.height() % 2 != 0) {
    Fail(ErrorCode::kDimensionMismatch, "box downsampling needs even sizes");
  }
  Plane out(plane.width() / 2, plane.height() / 2);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.at(x, y) = 0.25 * (plane.at(2 * x, 2 * y) + plane.at(2 * x + 1, 2 * y) +
                             plane.at(2 * x, 2 * y + 1) +
                             plane.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

Plane NearestUpsample2(const Plane& plane) {
  Plane out(plane.width() * 2, plane.height() * 2);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = plane.at(x / 2, y / 2);
  }
  return out;
}

}  // namespace ejpeg::internal
