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

#ifndef EJPEG_CODEC_H_
#define EJPEG_CODEC_H_

#include "ejpeg/compressed_image.h"
#include "ejpeg/image.h"
#include "ejpeg/quant_table.h"

namespace ejpeg {

// Baseline JPEG lossy stage: color conversion, edge-replicated padding to the
// block grid, 2x2 box-averaged chroma for 4:2:0, level shift, DCT, division by
// the table and rounding half away from zero. Tables come from the Annex K
// examples scaled by qf. Grayscale inputs produce a single plane.
CompressedImage EncodePipeline(const PixelImage& image, int qf,
                               Sampling sampling);

CompressedImage EncodeWithTables(const PixelImage& image, Sampling sampling,
                                 const QuantTable& luma_table,
                                 const QuantTable& chroma_table);

// Re-quantizes an image with the geometry and tables of an existing code.
CompressedImage Reencode(const PixelImage& image, const CompressedImage& like);

enum class ChromaUpsampling {
  kNearest,     // 2x2 pixel replication, as common baseline decoders do
  kDctLowpass,  // 16x16 zero-padded inverse DCT, the reconstruction model
};

struct DecodeOptions {
  // Round and clamp each component to 8 bits before color conversion and the
  // output after it, like an integer decoder. When false every stage stays
  // real valued and only the final clamp to [0, 255] is applied.
  bool integer_samples = true;
  ChromaUpsampling chroma_upsampling = ChromaUpsampling::kNearest;
};

// Standard decode: dequantize, inverse DCT, upsample chroma, convert to RGB,
// clamp, crop to the original size.
PixelImage DecodeStandard(const CompressedImage& code,
                          const DecodeOptions& options = {});

}  // namespace ejpeg

#endif  // EJPEG_CODEC_H_
