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

#ifndef EJPEG_COMPRESSED_IMAGE_H_
#define EJPEG_COMPRESSED_IMAGE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ejpeg/quant_table.h"

namespace ejpeg {

enum class ChannelId { kY, kCb, kCr };
enum class Sampling { k444, k420 };

const char* SamplingName(Sampling sampling);
// Accepts "444", "4:4:4", "420", "4:2:0".
Sampling ParseSampling(const char* text);

// One component's grid of quantized 8x8 blocks. Block (r, c) occupies
// coeffs[(r * block_cols + c) * 64 .. + 64) in natural order.
struct QuantizedPlane {
  int block_rows = 0;
  int block_cols = 0;
  std::vector<int32_t> coeffs;
  QuantTable table;
  ChannelId channel = ChannelId::kY;

  QuantizedPlane() = default;
  QuantizedPlane(int rows, int cols, const QuantTable& table, ChannelId id);

  int block_count() const { return block_rows * block_cols; }
  std::span<int32_t> block(int index) {
    return std::span<int32_t>(coeffs).subspan(static_cast<size_t>(index) * 64,
                                              64);
  }
  std::span<const int32_t> block(int index) const {
    return std::span<const int32_t>(coeffs).subspan(
        static_cast<size_t>(index) * 64, 64);
  }

  bool operator==(const QuantizedPlane&) const = default;
};

// The content of a baseline JPEG file that matters for decoding: quantized
// coefficients and tables per component. planes[0] is luma; color images
// carry Cb and Cr at planes[1..2].
struct CompressedImage {
  int width = 0;
  int height = 0;
  Sampling sampling = Sampling::k444;
  std::vector<QuantizedPlane> planes;

  bool is_color() const { return planes.size() == 3; }
  // Side of the square pixel footprint of one block of plane p: 16 for
  // 4:2:0 chroma, else 8.
  int BlockFootprint(int p) const;
  // Padded pixel extent covered by the block grids.
  int PaddedWidth() const;
  int PaddedHeight() const;

  // Throws kInvalidArgument when grids, tables or sizes are inconsistent.
  void Validate() const;

  bool operator==(const CompressedImage&) const = default;
};

struct BlockGrid {
  int rows = 0;
  int cols = 0;
};

// Block grids for an image of the given size: 8-pixel aligned for 4:4:4 and
// grayscale, 16-pixel MCU aligned for 4:2:0 (luma grid is twice the chroma
// grid).
BlockGrid LumaGrid(int width, int height, Sampling sampling);
BlockGrid ChromaGrid(int width, int height, Sampling sampling);

// Empty code (all coefficients zero) with the given tables.
CompressedImage MakeEmptyCode(int width, int height, int channels,
                              Sampling sampling, const QuantTable& luma_table,
                              const QuantTable& chroma_table);

}  // namespace ejpeg

#endif  // EJPEG_COMPRESSED_IMAGE_H_
