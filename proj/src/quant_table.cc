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

#include "ejpeg/quant_table.h"

#include <algorithm>
#include <string>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

QuantTable MakeTable(std::array<uint16_t, 64> steps) {
  QuantTable t;
  t.steps = steps;
  return t;
}

std::array<uint8_t, 64> InvertZigzag(const std::array<uint8_t, 64>& zz) {
  std::array<uint8_t, 64> inv{};
  for (int i = 0; i < 64; ++i) inv[zz[i]] = static_cast<uint8_t>(i);
  return inv;
}

}  // namespace

const std::array<uint8_t, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

const std::array<uint8_t, 64> kNaturalToZigzag = InvertZigzag(kZigzagToNatural);

uint16_t QuantTable::MinStep() const {
  return *std::min_element(steps.begin(), steps.end());
}

uint16_t QuantTable::MaxStep() const {
  return *std::max_element(steps.begin(), steps.end());
}

const QuantTable& BaselineLumaTable() {
  static const QuantTable kTable = MakeTable({
      16, 11, 10, 16, 24,  40,  51,  61,   //
      12, 12, 14, 19, 26,  58,  60,  55,   //
      14, 13, 16, 24, 40,  57,  69,  56,   //
      14, 17, 22, 29, 51,  87,  80,  62,   //
      18, 22, 37, 56, 68,  109, 103, 77,   //
      24, 35, 55, 64, 81,  104, 113, 92,   //
      49, 64, 78, 87, 103, 121, 120, 101,  //
      72, 92, 95, 98, 112, 100, 103, 99});
  return kTable;
}

const QuantTable& BaselineChromaTable() {
  static const QuantTable kTable = MakeTable({
      17, 18, 24, 47, 99, 99, 99, 99,  //
      18, 21, 26, 66, 99, 99, 99, 99,  //
      24, 26, 56, 99, 99, 99, 99, 99,  //
      47, 66, 99, 99, 99, 99, 99, 99,  //
      99, 99, 99, 99, 99, 99, 99, 99,  //
      99, 99, 99, 99, 99, 99, 99, 99,  //
      99, 99, 99, 99, 99, 99, 99, 99,  //
      99, 99, 99, 99, 99, 99, 99, 99});
  return kTable;
}

QuantTable QualityToQuantTable(int qf, const QuantTable& baseline) {
  if (qf < 1 || qf > 99) {
    Fail(ErrorCode::kInvalidArgument,
         "quality factor must be in [1, 99], got " + std::to_string(qf));
  }
  const long scale = qf < 50 ? 5000 / qf : 200 - 2 * qf;
  QuantTable out;
  for (int k = 0; k < 64; ++k) {
    const long step = (baseline.steps[k] * scale + 50) / 100;
    out.steps[k] = static_cast<uint16_t>(std::clamp(step, 1L, 255L));
  }
  return out;
}

}  // namespace ejpeg
