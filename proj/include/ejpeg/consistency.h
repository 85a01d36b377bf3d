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

#ifndef EJPEG_CONSISTENCY_H_
#define EJPEG_CONSISTENCY_H_

#include <vector>

#include "ejpeg/compressed_image.h"
#include "ejpeg/image.h"

namespace ejpeg {

// Gain of the shifted sigmoid; 4 gives dDelta/du = 1 at u = 0.
constexpr double kSigmoidGain = 4.0;
// Half-width reduction of the residual box. Keeps X_Q + Delta strictly away
// from the rounding boundary after floating point evaluation, for every
// coefficient magnitude a baseline code can hold.
constexpr double kResidualGuard = 1e-9;
constexpr double kResidualBound = 0.5 - kResidualGuard;

// Delta = sigmoid(gain * u) - 1/2, written as (1/2 - guard) tanh(gain u / 2).
double ResidualFromLatent(double u, double gain = kSigmoidGain);
double ResidualDerivative(double u, double gain = kSigmoidGain);
// Finite inverse of ResidualFromLatent; |residual| at the bound maps to the
// latent that reproduces the bound.
double LatentFromResidual(double residual, double gain = kSigmoidGain);

// One unbounded value per stored coefficient, laid out like the code's
// planes (block-major, natural order).
struct LatentField {
  std::vector<std::vector<double>> planes;

  static LatentField Neutral(const CompressedImage& code);
  bool Matches(const CompressedImage& code) const;
  size_t size() const;
  bool AllFinite() const;
  bool operator==(const LatentField&) const = default;
};

// DCT-domain view of an image relative to a code: per plane, the normalized
// coefficients X_N = X_D / M of every block (same layout as the code).
// Luma and 4:4:4 chroma use 8x8 blocks; 4:2:0 chroma uses the upper-left
// quadrant of the 16x16 DCT of the full-resolution channel, scaled by 1/2.
struct DctImage {
  int width = 0;
  int height = 0;
  std::vector<std::vector<double>> planes;
};

struct ConsistentImage {
  PixelImage pixels;
  DctImage dct;
  LatentField latent;
};

// Normalized coefficients of the latent's reconstruction: X_Q + Delta(u).
DctImage LatentToDct(const CompressedImage& code, const LatentField& latent);

// Pixels of a DCT-domain image: luma IDCT8, 4:2:0 chroma IDCT16 of the
// zero-padded block, color conversion, crop. No clamping.
PixelImage SynthesizeImage(const CompressedImage& code, const DctImage& dct);

// Normalized coefficients of a pixel image under the same block model.
// Non-block-aligned images are edge-replicated first.
DctImage AnalyzeImage(const PixelImage& image, const CompressedImage& code);

// Throws kDimensionMismatch when the latent shape differs from the code.
ConsistentImage Reconstruct(const CompressedImage& code,
                            const LatentField& latent);

// Per coefficient: X_N <- X_Q + clip(X_N - X_Q, -bound, bound).
DctImage ProjectDct(const CompressedImage& code, const DctImage& dct);
ConsistentImage ProjectToConsistent(const PixelImage& desired,
                                    const CompressedImage& code);

enum class VerifyMode {
  kDctExact,      // checks the real-valued representation as given
  kPixelRounded,  // rounds pixels to 8 bits first
};
const char* VerifyModeName(VerifyMode mode);

struct BlockViolation {
  int plane = 0;
  int row = 0;
  int col = 0;
  double deviation = 0.0;  // worst |X_N - X_Q| in the block
};

struct ChannelReport {
  ChannelId channel = ChannelId::kY;
  int total_blocks = 0;
  int consistent_blocks = 0;
  int violating_blocks = 0;
  double worst_deviation = 0.0;
};

struct ConsistencyReport {
  VerifyMode mode = VerifyMode::kDctExact;
  std::vector<ChannelReport> channels;
  std::vector<BlockViolation> violations;

  bool consistent() const { return violations.empty(); }
  int violating_blocks() const;
  int total_blocks() const;
  double worst_deviation() const;
};

ConsistencyReport VerifyConsistency(const DctImage& dct,
                                    const CompressedImage& code);
// kDctExact analyzes the real-valued pixels directly. Exact for outputs of
// Reconstruct and ProjectToConsistent when the size is block aligned; for
// other sizes verify the DctImage, since edge padding is not recoverable from
// cropped pixels.
ConsistencyReport VerifyConsistency(const PixelImage& image,
                                    const CompressedImage& code,
                                    VerifyMode mode);

// Backpropagates a gradient on Reconstruct(code, latent).pixels to the latent.
LatentField LatentGradient(const CompressedImage& code,
                           const LatentField& latent,
                           const PixelImage& pixel_gradient);

// Unquantized comparison of the 4:2:0 pipeline (box subsampling, DCT8,
// zero-padded IDCT16) against the 16x16 low-pass model (DCT16, keep the 8x8
// low-frequency quadrant, IDCT16). RGB PSNR, +inf when identical. Throws
// kInvalidArgument for grayscale input.
double ChromaPipelineCompare(const PixelImage& image);

// Mean over 16x16 level-shifted chroma blocks of the fraction of DCT16
// energy in the low-frequency quadrant, averaged over Cb and Cr. A block with
// no energy counts as 1.
double ChromaEnergyRatio(const PixelImage& image);

}  // namespace ejpeg

#endif  // EJPEG_CONSISTENCY_H_
