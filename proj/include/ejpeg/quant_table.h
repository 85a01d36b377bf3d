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

#ifndef EJPEG_QUANT_TABLE_H_
#define EJPEG_QUANT_TABLE_H_

#include <array>
#include <cstdint>

namespace ejpeg {

// 8x8 quantization step sizes in natural (row-major) order, each in [1, 255].
struct QuantTable {
  std::array<uint16_t, 64> steps{};

  uint16_t operator[](int k) const { return steps[k]; }
  uint16_t MinStep() const;
  uint16_t MaxStep() const;

  bool operator==(const QuantTable&) const = default;
};

// Example tables from ITU-T T.81 Annex K (K.1 luminance, K.2 chrominance).
const QuantTable& BaselineLumaTable();
const QuantTable& BaselineChromaTable();

// Quality factor scaling used by the IJG reference encoder:
//   scale = qf < 50 ? 5000 / qf : 200 - 2 qf
//   step  = clamp(floor((base * scale + 50) / 100), 1, 255)
// For qf < 50 this is 50 * base / qf up to integer rounding.
// Throws kInvalidArgument unless 1 <= qf <= 99.
QuantTable QualityToQuantTable(int qf, const QuantTable& baseline);

// Natural index of the k-th coefficient in zigzag scan order, and its inverse.
extern const std::array<uint8_t, 64> kZigzagToNatural;
extern const std::array<uint8_t, 64> kNaturalToZigzag;

}  // namespace ejpeg

#endif  // EJPEG_QUANT_TABLE_H_
