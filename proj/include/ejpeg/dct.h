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

#ifndef EJPEG_DCT_H_
#define EJPEG_DCT_H_

#include <array>

namespace ejpeg {

// Row-major coefficient grids, DC at index 0.
using Block8 = std::array<double, 64>;
using Block16 = std::array<double, 256>;

// Orthonormal type-II 2-D DCT and its inverse (type-III). Double precision,
// separable matrix form; the transforms are exact adjoints of each other.
Block8 ForwardDct8(const Block8& pixels);
Block8 InverseDct8(const Block8& coeffs);
Block16 ForwardDct16(const Block16& pixels);
Block16 InverseDct16(const Block16& coeffs);

// A 16x16 block whose only non-zero coefficients are the upper-left 8x8
// quadrant is the DCT-domain model of a 2x-subsampled 8x8 chroma block. The
// factor 2 keeps constant signals at the same level in both sizes.
constexpr double kChromaEmbedScale = 2.0;

Block16 EmbedLowFrequency(const Block8& coeffs);
Block8 ExtractLowFrequency(const Block16& coeffs);

}  // namespace ejpeg

#endif  // EJPEG_DCT_H_
