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

#include "ejpeg/compressed_image.h"

#include <string>
#include <string_view>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

}  // namespace

const char* SamplingName(Sampling sampling) {
  return sampling == Sampling::k420 ? "4:2:0" : "4:4:4";
}

Sampling ParseSampling(const char* text) {
  const std::string_view s(text);
  if (s == "420" || s == "4:2:0") return Sampling::k420;
  if (s == "444" || s == "4:4:4") return Sampling::k444;
  Fail(ErrorCode::kInvalidArgument,
       "unknown sampling '" + std::string(s) + "' (expected 420 or 444)");
}

QuantizedPlane::QuantizedPlane(int rows, int cols, const QuantTable& t,
                               ChannelId id)
    : block_rows(rows),
      block_cols(cols),
      coeffs(static_cast<size_t>(rows) * cols * 64, 0),
      table(t),
      channel(id) {}

int CompressedImage::BlockFootprint(int p) const {
  return (p > 0 && sampling == Sampling::k420) ? 16 : 8;
}

int CompressedImage::PaddedWidth() const { return planes[0].block_cols * 8; }
int CompressedImage::PaddedHeight() const { return planes[0].block_rows * 8; }

BlockGrid LumaGrid(int width, int height, Sampling sampling) {
  if (sampling == Sampling::k420) {
    return {2 * CeilDiv(height, 16), 2 * CeilDiv(width, 16)};
  }
  return {CeilDiv(height, 8), CeilDiv(width, 8)};
}

BlockGrid ChromaGrid(int width, int height, Sampling sampling) {
  if (sampling == Sampling::k420) {
    return {CeilDiv(height, 16), CeilDiv(width, 16)};
  }
  return {CeilDiv(height, 8), CeilDiv(width, 8)};
}

void CompressedImage::Validate() const {
  if (width < 1 || height < 1) {
    Fail(ErrorCode::kInvalidArgument, "code has degenerate dimensions");
  }
  if (planes.size() != 1 && planes.size() != 3) {
    Fail(ErrorCode::kInvalidArgument, "code must have 1 or 3 planes");
  }
  const BlockGrid luma = LumaGrid(width, height, sampling);
  const BlockGrid chroma = ChromaGrid(width, height, sampling);
  for (size_t p = 0; p < planes.size(); ++p) {
    const QuantizedPlane& plane = planes[p];
    const BlockGrid expect = p == 0 ? luma : chroma;
    if (plane.block_rows != expect.rows || plane.block_cols != expect.cols) {
      Fail(ErrorCode::kInvalidArgument,
           "plane " + std::to_string(p) + " has a " +
               std::to_string(plane.block_rows) + "x" +
               std::to_string(plane.block_cols) + " block grid, expected " +
               std::to_string(expect.rows) + "x" + std::to_string(expect.cols));
    }
    if (plane.coeffs.size() != static_cast<size_t>(plane.block_count()) * 64) {
      Fail(ErrorCode::kInvalidArgument, "plane coefficient count mismatch");
    }
    if (plane.table.MinStep() < 1 || plane.table.MaxStep() > 255) {
      Fail(ErrorCode::kInvalidArgument, "quantization steps must be in [1, 255]");
    }
  }
}

CompressedImage MakeEmptyCode(int width, int height, int channels,
                              Sampling sampling, const QuantTable& luma_table,
                              const QuantTable& chroma_table) {
  if (width < 1 || height < 1) {
    Fail(ErrorCode::kInvalidArgument, "image must be at least 1x1 pixels");
  }
  CompressedImage code;
  code.width = width;
  code.height = height;
  code.sampling = channels == 3 ? sampling : Sampling::k444;
  const BlockGrid luma = LumaGrid(width, height, code.sampling);
  code.planes.emplace_back(luma.rows, luma.cols, luma_table, ChannelId::kY);
  if (channels == 3) {
    const BlockGrid chroma = ChromaGrid(width, height, code.sampling);
    code.planes.emplace_back(chroma.rows, chroma.cols, chroma_table,
                             ChannelId::kCb);
    code.planes.emplace_back(chroma.rows, chroma.cols, chroma_table,
                             ChannelId::kCr);
  }
  return code;
}

}  // namespace ejpeg
