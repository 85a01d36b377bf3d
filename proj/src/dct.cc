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

#include "ejpeg/dct.h"

#include <cmath>
#include <numbers>

namespace ejpeg {
namespace {

template <int N>
struct DctBasis {
  // basis[k * N + n] = alpha(k) cos(pi (2n + 1) k / 2N)
  std::array<double, N * N> basis;

  DctBasis() {
    for (int k = 0; k < N; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
      for (int n = 0; n < N; ++n) {
        basis[k * N + n] =
            alpha * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * N));
      }
    }
  }
};

template <int N>
const DctBasis<N>& Basis() {
  static const DctBasis<N> kBasis;
  return kBasis;
}

// out = B * in * B^T (forward) or B^T * in * B (inverse).
template <int N>
std::array<double, N * N> Transform(const std::array<double, N * N>& in,
                                    bool inverse) {
  const auto& b = Basis<N>().basis;
  std::array<double, N * N> tmp{};
  std::array<double, N * N> out{};
  // Rows.
  for (int y = 0; y < N; ++y) {
    for (int k = 0; k < N; ++k) {
      double sum = 0.0;
      for (int n = 0; n < N; ++n) {
        const double w = inverse ? b[n * N + k] : b[k * N + n];
        sum += w * in[y * N + n];
      }
      tmp[y * N + k] = sum;
    }
  }
  // Columns.
  for (int x = 0; x < N; ++x) {
    for (int k = 0; k < N; ++k) {
      double sum = 0.0;
      for (int n = 0; n < N; ++n) {
        const double w = inverse ? b[n * N + k] : b[k * N + n];
        sum += w * tmp[n * N + x];
      }
      out[k * N + x] = sum;
    }
  }
  return out;
}

}  // namespace

Block8 ForwardDct8(const Block8& pixels) { return Transform<8>(pixels, false); }
Block8 InverseDct8(const Block8& coeffs) { return Transform<8>(coeffs, true); }
Block16 ForwardDct16(const Block16& pixels) {
  return Transform<16>(pixels, false);
}
Block16 InverseDct16(const Block16& coeffs) {
  return Transform<16>(coeffs, true);
}

Block16 EmbedLowFrequency(const Block8& coeffs) {
  Block16 out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      out[v * 16 + u] = kChromaEmbedScale * coeffs[v * 8 + u];
    }
  }
  return out;
}

Block8 ExtractLowFrequency(const Block16& coeffs) {
  Block8 out;
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      out[v * 8 + u] = coeffs[v * 16 + u] / kChromaEmbedScale;
    }
  }
  return out;
}

}  // namespace ejpeg
