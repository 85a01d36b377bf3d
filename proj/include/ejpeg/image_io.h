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

#ifndef EJPEG_IMAGE_IO_H_
#define EJPEG_IMAGE_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ejpeg/image.h"

namespace ejpeg {

// Binary PGM (P5) and PPM (P6), maxval <= 255.
PixelImage DecodePnm(std::span<const uint8_t> bytes);
// Samples are rounded and clamped to 8 bits. Gray images become P5.
std::vector<uint8_t> EncodePnm(const PixelImage& image);

// 8-bit PNG. Gray and gray+alpha decode to one channel, everything else to
// RGB; alpha is dropped.
PixelImage DecodePng(std::span<const uint8_t> bytes);
std::vector<uint8_t> EncodePng(const PixelImage& image);

// Detects PNG or PNM by signature. Throws kUnsupportedFormat otherwise.
PixelImage DecodeImage(std::span<const uint8_t> bytes);
bool LooksLikeJpeg(std::span<const uint8_t> bytes);

// Single-channel view of an image as mask weights: 0..255 -> 0..1. Color
// inputs use their first channel.
RegionMask MaskFromImage(const PixelImage& image);
PixelImage MaskToImage(const RegionMask& mask);

std::vector<uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes);

// Format chosen by signature on read and by extension (.png, .ppm, .pgm,
// .pnm) on write.
PixelImage ReadImageFile(const std::string& path);
void WriteImageFile(const std::string& path, const PixelImage& image);

}  // namespace ejpeg

#endif  // EJPEG_IMAGE_IO_H_
