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

#include "ejpeg/codec.h"

#include <algorithm>
#include <cmath>

#include "block_transform.h"
#include "ejpeg/dct.h"
#include "ejpeg/error.h"

namespace ejpeg {
namespace {

void QuantizePlane(const Plane& samples, QuantizedPlane* plane) {
  const std::vector<double> x = internal::PixelsToBlocks(
      samples, plane->block_rows, plane->block_cols,
      internal::BlockModel::kDirect8);
  for (size_t i = 0; i < x.size(); ++i) {
    plane->coeffs[i] =
        static_cast<int32_t>(std::round(x[i] / plane->table[i % 64]));
  }
}

void RoundPlane(Plane* plane) {
  for (double& v : plane->values()) v = std::clamp(std::round(v), 0.0, 255.0);
}

// Quantizes image into the tables and geometry already present in code.
void EncodeInto(const PixelImage& image, CompressedImage* code) {
  std::vector<Plane> components = internal::ToComponents(image);
  const int pw = code->PaddedWidth();
  const int ph = code->PaddedHeight();
  for (size_t p = 0; p < components.size(); ++p) {
    Plane padded = components[p].EdgeExtended(pw, ph);
    if (p > 0 && code->sampling == Sampling::k420) {
      padded = internal::BoxDownsample2(padded);
    }
    QuantizePlane(padded, &code->planes[p]);
  }
}

}  // namespace

CompressedImage EncodeWithTables(const PixelImage& image, Sampling sampling,
                                 const QuantTable& luma_table,
                                 const QuantTable& chroma_table) {
  if (image.width() < 1 || image.height() < 1 || image.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot encode an empty image");
  }
  CompressedImage code =
      MakeEmptyCode(image.width(), image.height(), image.channels(), sampling,
                    luma_table, chroma_table);
  EncodeInto(image, &code);
  return code;
}

CompressedImage EncodePipeline(const PixelImage& image, int qf,
                               Sampling sampling) {
  return EncodeWithTables(image, sampling,
                          QualityToQuantTable(qf, BaselineLumaTable()),
                          QualityToQuantTable(qf, BaselineChromaTable()));
}

CompressedImage Reencode(const PixelImage& image, const CompressedImage& like) {
  if (image.width() != like.width || image.height() != like.height ||
      image.channels() != static_cast<int>(like.planes.size())) {
    Fail(ErrorCode::kDimensionMismatch, "image does not match code geometry");
  }
  CompressedImage code = like;
  EncodeInto(image, &code);
  return code;
}

PixelImage DecodeStandard(const CompressedImage& code,
                          const DecodeOptions& options) {
  code.Validate();
  const int pw = code.PaddedWidth();
  const int ph = code.PaddedHeight();
  std::vector<Plane> components;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    std::vector<double> x(q.coeffs.size());
    for (size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<double>(q.coeffs[i]) * q.table[i % 64];
    }
    const bool subsampled = code.BlockFootprint(static_cast<int>(p)) == 16;
    Plane samples;
    if (subsampled &&
        options.chroma_upsampling == ChromaUpsampling::kDctLowpass) {
      samples = internal::BlocksToPixels(x, q.block_rows, q.block_cols,
                                         internal::BlockModel::kLowpass16);
      if (options.integer_samples) RoundPlane(&samples);
    } else {
      samples = internal::BlocksToPixels(x, q.block_rows, q.block_cols,
                                         internal::BlockModel::kDirect8);
      if (options.integer_samples) RoundPlane(&samples);
      if (subsampled) samples = internal::NearestUpsample2(samples);
    }
    if (samples.width() != pw || samples.height() != ph) {
      Fail(ErrorCode::kInvalidArgument, "plane grids do not align");
    }
    components.push_back(samples.Cropped(0, 0, code.width, code.height));
  }
  PixelImage out = internal::FromComponents(std::move(components));
  return options.integer_samples ? out.Quantized8() : out.Clamped();
}

}  // namespace ejpeg
