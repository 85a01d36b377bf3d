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

#include "ejpeg/consistency.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "block_transform.h"
#include "ejpeg/color.h"
#include "ejpeg/dct.h"
#include "ejpeg/error.h"

namespace ejpeg {
namespace {

using internal::BlockModel;

void CheckLatent(const CompressedImage& code, const LatentField& latent) {
  if (!latent.Matches(code)) {
    Fail(ErrorCode::kDimensionMismatch, "latent field does not match the code");
  }
}

void CheckDct(const CompressedImage& code, const DctImage& dct) {
  bool ok = dct.width == code.width && dct.height == code.height &&
            dct.planes.size() == code.planes.size();
  for (size_t p = 0; ok && p < dct.planes.size(); ++p) {
    ok = dct.planes[p].size() == code.planes[p].coeffs.size();
  }
  if (!ok) {
    Fail(ErrorCode::kDimensionMismatch, "DCT image does not match the code");
  }
}

void CheckImageShape(const PixelImage& image, const CompressedImage& code) {
  if (image.width() != code.width || image.height() != code.height ||
      image.channels() != static_cast<int>(code.planes.size())) {
    Fail(ErrorCode::kDimensionMismatch,
         "image is " + std::to_string(image.width()) + "x" +
             std::to_string(image.height()) + "x" +
             std::to_string(image.channels()) + ", code is " +
             std::to_string(code.width) + "x" + std::to_string(code.height) +
             "x" + std::to_string(code.planes.size()));
  }
}

}  // namespace

double ResidualFromLatent(double u, double gain) {
  return kResidualBound * std::tanh(0.5 * gain * u);
}

double ResidualDerivative(double u, double gain) {
  const double t = std::tanh(0.5 * gain * u);
  return kResidualBound * 0.5 * gain * (1.0 - t * t);
}

double LatentFromResidual(double residual, double gain) {
  const double r = std::clamp(residual / kResidualBound, -1.0, 1.0);
  // tanh(20) rounds to 1 in double precision.
  constexpr double kLimit = 20.0;
  if (r >= 1.0) return 2.0 * kLimit / gain;
  if (r <= -1.0) return -2.0 * kLimit / gain;
  return 2.0 * std::atanh(r) / gain;
}

LatentField LatentField::Neutral(const CompressedImage& code) {
  LatentField f;
  for (const QuantizedPlane& p : code.planes) {
    f.planes.emplace_back(p.coeffs.size(), 0.0);
  }
  return f;
}

bool LatentField::Matches(const CompressedImage& code) const {
  if (planes.size() != code.planes.size()) return false;
  for (size_t p = 0; p < planes.size(); ++p) {
    if (planes[p].size() != code.planes[p].coeffs.size()) return false;
  }
  return true;
}

size_t LatentField::size() const {
  size_t n = 0;
  for (const auto& p : planes) n += p.size();
  return n;
}

bool LatentField::AllFinite() const {
  for (const auto& p : planes) {
    for (double v : p) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

DctImage LatentToDct(const CompressedImage& code, const LatentField& latent) {
  CheckLatent(code, latent);
  DctImage dct{code.width, code.height, {}};
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    std::vector<double> x(q.coeffs.size());
    for (size_t i = 0; i < x.size(); ++i) {
      x[i] = q.coeffs[i] + ResidualFromLatent(latent.planes[p][i]);
    }
    dct.planes.push_back(std::move(x));
  }
  return dct;
}

PixelImage SynthesizeImage(const CompressedImage& code, const DctImage& dct) {
  CheckDct(code, dct);
  std::vector<Plane> components;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    std::vector<double> x(dct.planes[p].size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = dct.planes[p][i] * q.table[i % 64];
    const Plane samples = internal::BlocksToPixels(
        x, q.block_rows, q.block_cols,
        internal::ModelFor(code, static_cast<int>(p)));
    components.push_back(samples.Cropped(0, 0, code.width, code.height));
  }
  return internal::FromComponents(std::move(components));
}

DctImage AnalyzeImage(const PixelImage& image, const CompressedImage& code) {
  CheckImageShape(image, code);
  const std::vector<Plane> components = internal::ToComponents(image);
  DctImage dct{code.width, code.height, {}};
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    const Plane padded =
        components[p].EdgeExtended(code.PaddedWidth(), code.PaddedHeight());
    std::vector<double> x = internal::PixelsToBlocks(
        padded, q.block_rows, q.block_cols,
        internal::ModelFor(code, static_cast<int>(p)));
    for (size_t i = 0; i < x.size(); ++i) x[i] /= q.table[i % 64];
    dct.planes.push_back(std::move(x));
  }
  return dct;
}

ConsistentImage Reconstruct(const CompressedImage& code,
                            const LatentField& latent) {
  ConsistentImage out;
  out.dct = LatentToDct(code, latent);
  out.pixels = SynthesizeImage(code, out.dct);
  out.latent = latent;
  return out;
}

DctImage ProjectDct(const CompressedImage& code, const DctImage& dct) {
  CheckDct(code, dct);
  DctImage out = dct;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const std::vector<int32_t>& q = code.planes[p].coeffs;
    for (size_t i = 0; i < q.size(); ++i) {
      const double d = std::clamp(dct.planes[p][i] - q[i], -kResidualBound,
                                  kResidualBound);
      out.planes[p][i] = q[i] + d;
    }
  }
  return out;
}

ConsistentImage ProjectToConsistent(const PixelImage& desired,
                                    const CompressedImage& code) {
  ConsistentImage out;
  out.dct = ProjectDct(code, AnalyzeImage(desired, code));
  out.pixels = SynthesizeImage(code, out.dct);
  out.latent = LatentField::Neutral(code);
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const std::vector<int32_t>& q = code.planes[p].coeffs;
    for (size_t i = 0; i < q.size(); ++i) {
      out.latent.planes[p][i] = LatentFromResidual(out.dct.planes[p][i] - q[i]);
    }
  }
  return out;
}

const char* VerifyModeName(VerifyMode mode) {
  return mode == VerifyMode::kDctExact ? "dct-exact" : "pixel-rounded";
}

int ConsistencyReport::violating_blocks() const {
  int n = 0;
  for (const auto& c : channels) n += c.violating_blocks;
  return n;
}

int ConsistencyReport::total_blocks() const {
  int n = 0;
  for (const auto& c : channels) n += c.total_blocks;
  return n;
}

double ConsistencyReport::worst_deviation() const {
  double w = 0.0;
  for (const auto& c : channels) w = std::max(w, c.worst_deviation);
  return w;
}

ConsistencyReport VerifyConsistency(const DctImage& dct,
                                    const CompressedImage& code) {
  CheckDct(code, dct);
  ConsistencyReport report;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    ChannelReport ch;
    ch.channel = q.channel;
    ch.total_blocks = q.block_count();
    for (int b = 0; b < q.block_count(); ++b) {
      bool bad = false;
      double worst = 0.0;
      for (int k = 0; k < 64; ++k) {
        const size_t i = static_cast<size_t>(b) * 64 + k;
        const double xn = dct.planes[p][i];
        // NaN compares unequal and is reported with an infinite deviation.
        const double dev = std::isfinite(xn)
                               ? std::abs(xn - q.coeffs[i])
                               : std::numeric_limits<double>::infinity();
        worst = std::max(worst, dev);
        if (!(std::round(xn) == static_cast<double>(q.coeffs[i]))) bad = true;
      }
      ch.worst_deviation = std::max(ch.worst_deviation, worst);
      if (bad) {
        ++ch.violating_blocks;
        report.violations.push_back({static_cast<int>(p), b / q.block_cols,
                                     b % q.block_cols, worst});
      } else {
        ++ch.consistent_blocks;
      }
    }
    report.channels.push_back(ch);
  }
  return report;
}

ConsistencyReport VerifyConsistency(const PixelImage& image,
                                    const CompressedImage& code,
                                    VerifyMode mode) {
  ConsistencyReport report = VerifyConsistency(
      AnalyzeImage(mode == VerifyMode::kPixelRounded ? image.Quantized8()
                                                     : image,
                   code),
      code);
  report.mode = mode;
  return report;
}

LatentField LatentGradient(const CompressedImage& code,
                           const LatentField& latent,
                           const PixelImage& pixel_gradient) {
  CheckLatent(code, latent);
  CheckImageShape(pixel_gradient, code);
  // Transpose of the linear YCbCr -> RGB map; the offsets drop out.
  std::vector<Plane> grads;
  if (code.is_color()) {
    const auto& m = kYcbcrToRgbMatrix;
    for (int j = 0; j < 3; ++j) {
      Plane g(code.width, code.height);
      for (int y = 0; y < code.height; ++y) {
        for (int x = 0; x < code.width; ++x) {
          g.at(x, y) = m[0][j] * pixel_gradient.at(0, x, y) +
                       m[1][j] * pixel_gradient.at(1, x, y) +
                       m[2][j] * pixel_gradient.at(2, x, y);
        }
      }
      grads.push_back(std::move(g));
    }
  } else {
    grads.push_back(pixel_gradient.plane(0));
  }
  LatentField out;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const QuantizedPlane& q = code.planes[p];
    // Adjoint of cropping: zero outside the visible area.
    Plane padded(code.PaddedWidth(), code.PaddedHeight());
    for (int y = 0; y < code.height; ++y) {
      for (int x = 0; x < code.width; ++x) padded.at(x, y) = grads[p].at(x, y);
    }
    std::vector<double> g = internal::PixelGradientToBlocks(
        padded, q.block_rows, q.block_cols,
        internal::ModelFor(code, static_cast<int>(p)));
    for (size_t i = 0; i < g.size(); ++i) {
      g[i] *= q.table[i % 64] * ResidualDerivative(latent.planes[p][i]);
    }
    out.planes.push_back(std::move(g));
  }
  return out;
}

namespace {

std::vector<Plane> PaddedComponents16(const PixelImage& image) {
  if (image.channels() != 3) {
    Fail(ErrorCode::kInvalidArgument, "chroma analysis needs an RGB image");
  }
  const int pw = (image.width() + 15) / 16 * 16;
  const int ph = (image.height() + 15) / 16 * 16;
  std::vector<Plane> c = internal::ToComponents(image);
  for (Plane& p : c) p = p.EdgeExtended(pw, ph);
  return c;
}

}  // namespace

double ChromaPipelineCompare(const PixelImage& image) {
  const std::vector<Plane> c = PaddedComponents16(image);
  const int rows = c[0].height() / 16;
  const int cols = c[0].width() / 16;
  std::vector<Plane> actual = {c[0]};
  std::vector<Plane> model = {c[0]};
  for (int k = 1; k < 3; ++k) {
    const std::vector<double> sub = internal::PixelsToBlocks(
        internal::BoxDownsample2(c[k]), rows, cols, BlockModel::kDirect8);
    actual.push_back(
        internal::BlocksToPixels(sub, rows, cols, BlockModel::kLowpass16));
    const std::vector<double> low =
        internal::PixelsToBlocks(c[k], rows, cols, BlockModel::kLowpass16);
    model.push_back(
        internal::BlocksToPixels(low, rows, cols, BlockModel::kLowpass16));
  }
  for (auto* set : {&actual, &model}) {
    for (Plane& p : *set) p = p.Cropped(0, 0, image.width(), image.height());
  }
  return Psnr(internal::FromComponents(std::move(actual)),
              internal::FromComponents(std::move(model)));
}

double ChromaEnergyRatio(const PixelImage& image) {
  const std::vector<Plane> c = PaddedComponents16(image);
  const int rows = c[0].height() / 16;
  const int cols = c[0].width() / 16;
  double sum = 0.0;
  for (int k = 1; k < 3; ++k) {
    for (int r = 0; r < rows; ++r) {
      for (int col = 0; col < cols; ++col) {
        Block16 px;
        for (int y = 0; y < 16; ++y) {
          for (int x = 0; x < 16; ++x) {
            px[y * 16 + x] = c[k].at(col * 16 + x, r * 16 + y) - 128.0;
          }
        }
        const Block16 x = ForwardDct16(px);
        double low = 0.0;
        double total = 0.0;
        for (int v = 0; v < 16; ++v) {
          for (int u = 0; u < 16; ++u) {
            const double e = x[v * 16 + u] * x[v * 16 + u];
            total += e;
            if (u < 8 && v < 8) low += e;
          }
        }
        sum += total > 0.0 ? low / total : 1.0;
      }
    }
  }
  return sum / (2.0 * rows * cols);
}

}  // namespace ejpeg
