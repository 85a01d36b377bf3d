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

#ifndef EJPEG_JFIF_H_
#define EJPEG_JFIF_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ejpeg/compressed_image.h"

namespace ejpeg {

// Parses a baseline sequential, 8-bit, Huffman-coded JPEG stream (SOF0/SOF1,
// DQT, DHT, DRI with RSTn, single or multiple scans). Supported layouts:
// one component, or three components in 4:4:4 or 4:2:0.
//
// Throws Error(kUnsupportedFormat) naming the marker for progressive,
// lossless, hierarchical and arithmetic-coded streams, and ParseError with the
// byte offset for malformed or truncated input.
CompressedImage ParseJfif(std::span<const uint8_t> bytes);

// Writes a JFIF stream with the Annex K example Huffman tables, a single
// interleaved scan and no restart markers. ParseJfif inverts it exactly.
// Throws kInvalidArgument when a coefficient is outside the baseline range
// (|AC| <= 1023, |DC difference| <= 2047).
std::vector<uint8_t> SerializeJfif(const CompressedImage& code);

}  // namespace ejpeg

#endif  // EJPEG_JFIF_H_
