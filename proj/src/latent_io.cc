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

#include "ejpeg/latent_io.h"

#include <bit>
#include <string>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

void AppendDoubles(std::span<const double> values, std::vector<uint8_t>& out) {
  for (double v : values) {
    const uint64_t bits = std::bit_cast<uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
}

void ReadDoubles(std::span<const uint8_t> bytes, size_t& pos, std::span<double> out) {
  for (double& v : out) {
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
    v = std::bit_cast<double>(bits);
    pos += 8;
  }
}

void CheckSize(std::span<const uint8_t> bytes, size_t count) {
  if (bytes.size() != count * 8) {
    throw ParseError(std::min(bytes.size(), count * 8),
                     "expected " + std::to_string(count * 8) + " bytes of doubles, got " +
                         std::to_string(bytes.size()));
  }
}

}  // namespace

std::vector<uint8_t> SerializeLatent(const LatentField& latent) {
  std::vector<uint8_t> out;
  out.reserve(latent.size() * 8);
  for (const auto& p : latent.planes) AppendDoubles(p, out);
  return out;
}

LatentField ParseLatent(std::span<const uint8_t> bytes, const CompressedImage& code) {
  LatentField latent = LatentField::Neutral(code);
  CheckSize(bytes, latent.size());
  size_t pos = 0;
  for (auto& p : latent.planes) ReadDoubles(bytes, pos, p);
  return latent;
}

std::vector<uint8_t> SerializeRawImage(const PixelImage& image) {
  std::vector<uint8_t> out;
  for (int c = 0; c < image.channels(); ++c) AppendDoubles(image.plane(c).values(), out);
  return out;
}

PixelImage ParseRawImage(std::span<const uint8_t> bytes, int width, int height,
                         int channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    Fail(ErrorCode::kInvalidArgument, "raw image dimensions must be positive");
  }
  PixelImage image(width, height, channels);
  CheckSize(bytes, static_cast<size_t>(width) * height * channels);
  size_t pos = 0;
  for (int c = 0; c < channels; ++c) ReadDoubles(bytes, pos, image.plane(c).values());
  return image;
}

}  // namespace ejpeg
