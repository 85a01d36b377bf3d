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

#ifndef EJPEG_LATENT_IO_H_
#define EJPEG_LATENT_IO_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ejpeg/compressed_image.h"
#include "ejpeg/consistency.h"
#include "ejpeg/image.h"

namespace ejpeg {

// Latent snapshot: raw little-endian IEEE-754 doubles, planes in order,
// blocks in order, 64 natural-order values per block. There is no header;
// the shape comes from the code.
std::vector<uint8_t> SerializeLatent(const LatentField& latent);
// Throws kParseError when the byte count does not fit the code.
LatentField ParseLatent(std::span<const uint8_t> bytes, const CompressedImage& code);

// Real-valued image: raw little-endian doubles, planes in order, row-major.
std::vector<uint8_t> SerializeRawImage(const PixelImage& image);
PixelImage ParseRawImage(std::span<const uint8_t> bytes, int width, int height,
                         int channels);

}  // namespace ejpeg

#endif  // EJPEG_LATENT_IO_H_
