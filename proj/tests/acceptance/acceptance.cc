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

// Acceptance suite. Prints one line per criterion and exits 0 only when every
// selected criterion passes. Tolerances are fixed below.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ejpeg/classifier.h"
#include "ejpeg/codec.h"
#include "ejpeg/consistency.h"
#include "ejpeg/error.h"
#include "ejpeg/image_io.h"
#include "ejpeg/imprint.h"
#include "ejpeg/jfif.h"
#include "ejpeg/latent_io.h"
#include "ejpeg/objectives.h"
#include "ejpeg/optimizer.h"
#include "test_util.h"

namespace ejpeg {
namespace {

namespace fs = std::filesystem;
using testing::ColorFixtureNames;
using testing::GrayFixtureNames;
using testing::LoadFixture;
using testing::NaiveDct;
using testing::RandomCode;
using testing::RandomImage;
using testing::ReferencePath;
using testing::RelativeError;

// Criterion 1.
constexpr int kLatentTrials = 50;
constexpr std::array<int, 4> kConsistencyQualities = {5, 10, 25, 49};
constexpr double kConsistencyBudgetSeconds = 120.0;
// Criterion 2.
constexpr int kProjectionInstances = 200;
constexpr int kProjectionSide = 24;
// Allowed gap between the library analysis and the naive DCT, relative to
// the largest coefficient. Only guards the oracle input.
constexpr double kAnalysisTolerance = 1e-12;
// Criterion 3.
constexpr double kChromaPsnrFloorDb = 70.0;
constexpr double kChromaEnergyFloor = 0.999;
// Criterion 4.
constexpr int kGradientInstances = 20;
constexpr int kGradientSide = 16;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr double kClassifierGradientTolerance = 1e-3;
// Criterion 5.
constexpr int kRoundTripCodes = 50;
constexpr double kReferenceDecodeTolerance = 1.0;
// Criterion 6.
constexpr int kToolQuality = 5;
constexpr double kTvReductionFloor = 0.30;
constexpr int kTvStepLimit = 200;
constexpr int kImprintFixtures = 20;
constexpr double kShiftResidualTolerance = 1e-9;
constexpr int kDiverseCount = 3;
constexpr double kTightProximity = 1e3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool BlockAligned(const CompressedImage& code) {
  const int f = code.sampling == Sampling::k420 && code.is_color() ? 16 : 8;
  return code.width % f == 0 && code.height % f == 0;
}

// Mixture of scales, from near neutral to deep saturation of the residual.
LatentField RandomLatent(const CompressedImage& code, int trial,
                         std::mt19937& rng) {
  LatentField u = LatentField::Neutral(code);
  if (trial % 5 == 4) {
    std::uniform_real_distribution<double> wide(-1e4, 1e4);
    for (auto& p : u.planes)
      for (double& v : p) v = wide(rng);
    return u;
  }
  constexpr std::array<double, 4> kSigmas = {0.05, 0.5, 3.0, 40.0};
  std::normal_distribution<double> dist(0.0, kSigmas[trial % 5]);
  for (auto& p : u.planes)
    for (double& v : p) v = dist(rng);
  return u;
}

// Both routes: the latent's DCT view, and for aligned sizes the real-valued
// pixels re-analyzed from scratch.
bool OutputConsistent(const CompressedImage& code, const ConsistentImage& out) {
  if (!VerifyConsistency(out.dct, code).consistent()) return false;
  if (BlockAligned(code) &&
      !VerifyConsistency(out.pixels, code, VerifyMode::kDctExact).consistent())
    return false;
  return true;
}

// --- 1: consistency by construction ----------------------------------------

Outcome Criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> fixtures = ColorFixtureNames();
  for (const auto& g : GrayFixtureNames()) fixtures.push_back(g);
  std::mt19937 rng(1001);
  int trials = 0, failed = 0, pixel_checked = 0;
  for (const auto& name : fixtures) {
    const PixelImage image = LoadFixture(name);
    for (int qf : kConsistencyQualities) {
      for (int t = 0; t < kLatentTrials; ++t) {
        const Sampling sampling =
            image.channels() == 3 && t % 2 == 0 ? Sampling::k420 : Sampling::k444;
        const CompressedImage code = EncodePipeline(image, qf, sampling);
        const ConsistentImage out = Reconstruct(code, RandomLatent(code, t, rng));
        ++trials;
        pixel_checked += BlockAligned(code);
        if (!OutputConsistent(code, out)) {
          ++failed;
          std::printf("  violation: %s qf %d trial %d\n", name.c_str(), qf, t);
        }
      }
    }
  }
  const double elapsed = Seconds(start);
  Outcome o;
  o.pass = failed == 0 && elapsed < kConsistencyBudgetSeconds;
  o.detail = Format("trials %d, violating trials %d, pixel route %d, %.1f s (budget %.0f s)",
                    trials, failed, pixel_checked, elapsed, kConsistencyBudgetSeconds);
  return o;
}

// --- 2: projection against a per-coefficient clip oracle -------------------

Outcome Criterion2() {
  std::mt19937 rng(2002);
  std::uniform_int_distribution<int> quality(1, 99);
  const double b = kResidualBound;
  int mismatched = 0, not_idempotent = 0, analysis_off = 0;
  double worst_analysis = 0.0;
  for (int i = 0; i < kProjectionInstances; ++i) {
    const int qf = quality(rng);
    const PixelImage reference =
        RandomImage(kProjectionSide, kProjectionSide, 1, rng);
    const CompressedImage code = EncodePipeline(reference, qf, Sampling::k444);
    // Desired image far from the code: fresh noise, sometimes out of range.
    const PixelImage desired =
        RandomImage(kProjectionSide, kProjectionSide, 1, rng, -60.0, 315.0);

    const DctImage analyzed = AnalyzeImage(desired, code);
    const QuantizedPlane& plane = code.planes[0];
    std::vector<double> oracle(plane.coeffs.size());
    for (int blk = 0; blk < plane.block_count(); ++blk) {
      const int r = blk / plane.block_cols, c = blk % plane.block_cols;
      std::vector<double> px(64);
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          px[y * 8 + x] = desired.at(0, c * 8 + x, r * 8 + y) - 128.0;
      const std::vector<double> naive = NaiveDct(px, 8);
      double peak = 1.0;
      for (double v : naive) peak = std::max(peak, std::abs(v));
      for (int k = 0; k < 64; ++k) {
        const size_t idx = static_cast<size_t>(blk) * 64 + k;
        const double xn = analyzed.planes[0][idx];
        const double gap = std::abs(naive[k] / plane.table[k] - xn) * plane.table[k] / peak;
        worst_analysis = std::max(worst_analysis, gap);
        if (gap > kAnalysisTolerance) ++analysis_off;
        const double q = plane.coeffs[idx];
        oracle[idx] = xn < q - b ? q - b : (xn > q + b ? q + b : xn);
      }
    }
    const ConsistentImage projected = ProjectToConsistent(desired, code);
    if (projected.dct.planes[0] != oracle) ++mismatched;
    if (ProjectDct(code, projected.dct).planes[0] != projected.dct.planes[0])
      ++not_idempotent;
  }
  Outcome o;
  o.pass = mismatched == 0 && not_idempotent == 0 && analysis_off == 0;
  o.detail = Format(
      "instances %d, oracle mismatches %d, non-idempotent %d, analysis vs naive DCT %.2e",
      kProjectionInstances, mismatched, not_idempotent, worst_analysis);
  return o;
}

// --- 3: chroma alternative modeling ----------------------------------------

Outcome Criterion3() {
  Outcome o;
  std::string values;
  double worst_psnr = std::numeric_limits<double>::infinity(), worst_energy = 1.0;
  for (const auto& name : ColorFixtureNames()) {
    const PixelImage image = LoadFixture(name);
    const double psnr = ChromaPipelineCompare(image);
    const double energy = ChromaEnergyRatio(image);
    worst_psnr = std::min(worst_psnr, psnr);
    worst_energy = std::min(worst_energy, energy);
    if (psnr < kChromaPsnrFloorDb || energy < kChromaEnergyFloor) o.pass = false;
    values += Format(" %s %.2f dB %.6f;", name.c_str(), psnr, energy);
  }
  o.detail = Format("min psnr %.2f dB (floor %.0f), min energy %.6f (floor %.3f):",
                    worst_psnr, kChromaPsnrFloorDb, worst_energy, kChromaEnergyFloor) +
             values;
  return o;
}

// --- 4: gradient suite -----------------------------------------------------

using Evaluator = std::function<ObjectiveValue(const PixelImage&)>;

PixelImage Axpy(const PixelImage& x, double h, const PixelImage& d) {
  PixelImage out = x;
  for (int c = 0; c < x.channels(); ++c) {
    auto o = out.plane(c).values();
    auto dv = d.plane(c).values();
    for (size_t i = 0; i < o.size(); ++i) o[i] += h * dv[i];
  }
  return out;
}

double Dot(const PixelImage& a, const PixelImage& b) {
  double s = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    auto av = a.plane(c).values();
    auto bv = b.plane(c).values();
    for (size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  }
  return s;
}

// Sum of |a_i b_i|: the size of the terms a directional derivative cancels.
double AbsDot(const PixelImage& a, const PixelImage& b) {
  double s = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    auto av = a.plane(c).values();
    auto bv = b.plane(c).values();
    for (size_t i = 0; i < av.size(); ++i) s += std::abs(av[i] * bv[i]);
  }
  return s;
}

// Worst relative error over three random directions and every coordinate.
// Coordinates use a floor of max|gradient| so exact zeros compare absolutely;
// directions use AbsDot, so a derivative that cancels to near zero is not
// judged against finite difference round-off alone.
// A vanishing gradient returns +inf, since the check would be vacuous.
double GradientError(const Evaluator& f, const PixelImage& x, std::mt19937& rng) {
  const double h = kGradientStep;
  const ObjectiveValue v = f(x);
  double scale = 0.0;
  for (int c = 0; c < x.channels(); ++c)
    for (double g : v.gradient.plane(c).values()) scale = std::max(scale, std::abs(g));
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const PixelImage d = RandomImage(x.width(), x.height(), x.channels(), rng, -1.0, 1.0);
    const double fd = (f(Axpy(x, h, d)).value - f(Axpy(x, -h, d)).value) / (2 * h);
    worst = std::max(worst, RelativeError(Dot(v.gradient, d), fd, AbsDot(v.gradient, d)));
  }
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        PixelImage p = x, m = x;
        p.at(c, xx, y) += h;
        m.at(c, xx, y) -= h;
        const double fd = (f(p).value - f(m).value) / (2 * h);
        worst = std::max(worst, RelativeError(v.gradient.at(c, xx, y), fd, scale));
      }
    }
  }
  return worst;
}

// Interior rectangle with a few fractional weights.
RegionMask RandomMask(std::mt19937& rng) {
  const int n = kGradientSide;
  std::uniform_int_distribution<int> border(0, 2);
  const int bx = border(rng), by = border(rng);
  RegionMask mask = RegionMask::FromRect(n, n, {bx, by, n - 2 * bx, n - 2 * by});
  std::uniform_real_distribution<double> w(0.2, 1.0);
  std::uniform_int_distribution<int> pos(by, n - by - 1);
  for (int k = 0; k < 4; ++k) {
    const int px = std::clamp(pos(rng), bx, n - bx - 1);
    mask.at(px, pos(rng)) = w(rng);
  }
  return mask;
}

struct GradientCase {
  const char* name;
  double tolerance;
  // Builds one random instance and returns its evaluator and evaluation point.
  std::function<std::pair<Evaluator, PixelImage>(std::mt19937&)> make;
};

std::vector<GradientCase> GradientCases() {
  const int n = kGradientSide;
  const auto channels = [](std::mt19937& rng) { return rng() % 2 ? 3 : 1; };
  std::vector<GradientCase> cases;
  cases.push_back({"variance", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const PixelImage x0 = RandomImage(n, n, ch, rng);
    const RegionMask mask = RandomMask(rng);
    const double delta = std::uniform_real_distribution<double>(1, 400)(rng);
    const auto dir = rng() % 2 ? Direction::kIncrease : Direction::kDecrease;
    const auto mode = rng() % 2 ? VarianceMode::kRelative : VarianceMode::kAbsolute;
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalVariance(p, x0, mask, delta, dir, mode);
    }), RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"tv", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const RegionMask mask = RandomMask(rng);
    return std::make_pair(Evaluator([=](const PixelImage& p) { return EvalTv(p, mask); }),
                          RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"l1_target", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const PixelImage target = RandomImage(n, n, ch, rng);
    const RegionMask mask = RandomMask(rng);
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalL1Target(p, target, mask);
    }), RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"magnitude", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const PixelImage x0 = RandomImage(n, n, ch, rng);
    const RegionMask mask = RandomMask(rng);
    const double delta = std::uniform_real_distribution<double>(0.1, 1.5)(rng);
    const auto dir = rng() % 2 ? Direction::kIncrease : Direction::kDecrease;
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalMagnitude(p, x0, mask, delta, dir);
    }), RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"patch_dict", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const PixelImage x0 = RandomImage(n, n, ch, rng);
    const bool normalize = rng() % 2;
    const PatchSet source = ExtractPatches(
        x0, RegionMask::FromRect(n, n, {0, 0, n, n / 2}), kSourcePatchStride, normalize);
    const RegionMask target = RegionMask::FromRect(n, n, {0, n / 2 - 2, n, n / 2 + 2});
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalPatchDict(p, x0, source, target);
    }), RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"periodicity", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const RegionMask mask = RandomMask(rng);
    std::uniform_int_distribution<int> lag(-5, 5);
    std::vector<PeriodVector> dirs;
    while (dirs.size() < 2) {
      const PeriodVector v{lag(rng), lag(rng)};
      if (v.dx != 0 || v.dy != 0) dirs.push_back(v);
    }
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalPeriodicity(p, mask, dirs);
    }), RandomImage(n, n, ch, rng));
  }});
  cases.push_back({"diversity", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const PixelImage x0 = RandomImage(n, n, ch, rng);
    std::vector<PixelImage> outs;
    for (int i = 0; i < 3; ++i) outs.push_back(RandomImage(n, n, ch, rng));
    const RegionMask mask = RandomMask(rng);
    const double proximity = std::uniform_real_distribution<double>(0, 2)(rng);
    const size_t which = rng() % outs.size();
    const PixelImage x = outs[which];
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      auto copy = outs;
      copy[which] = p;
      auto d = EvalDiversity(copy, x0, mask, proximity);
      return ObjectiveValue{d.value, d.gradients[which]};
    }), x);
  }});
  cases.push_back({"range", kGradientTolerance, [=](std::mt19937& rng) {
    const int ch = channels(rng);
    const RegionMask mask = RandomMask(rng);
    return std::make_pair(Evaluator([=](const PixelImage& p) { return EvalRange(p, mask); }),
                          RandomImage(n, n, ch, rng, -40.0, 295.0));
  }});
  cases.push_back({"hsv", kGradientTolerance, [=](std::mt19937& rng) {
    const PixelImage x0 = RandomImage(n, n, 3, rng);
    const RegionMask mask = RandomMask(rng);
    const auto attr = static_cast<HsvAttribute>(rng() % 3);
    const double amount = attr == HsvAttribute::kHue
                              ? std::uniform_real_distribution<double>(-180, 180)(rng)
                              : std::uniform_real_distribution<double>(-0.8, 0.8)(rng);
    const PixelImage target = BuildHsvTarget(x0, mask, attr, amount);
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalL1Target(p, target, mask);
    }), RandomImage(n, n, 3, rng));
  }});
  cases.push_back({"classifier", kClassifierGradientTolerance, [=](std::mt19937& rng) {
    const auto hook = FindClassifier("toy");
    const int ch = channels(rng);
    const RegionMask mask = RandomMask(rng);
    const int cls = static_cast<int>(rng() % hook->class_count());
    return std::make_pair(Evaluator([=](const PixelImage& p) {
      return EvalClassifier(p, mask, *hook, cls);
    }), RandomImage(n, n, ch, rng));
  }});
  return cases;
}

Outcome Criterion4() {
  Outcome o;
  std::mt19937 rng(4004);
  for (const GradientCase& gc : GradientCases()) {
    double worst = 0.0;
    for (int i = 0; i < kGradientInstances; ++i) {
      auto [f, x] = gc.make(rng);
      worst = std::max(worst, GradientError(f, x, rng));
    }
    const bool ok = worst <= gc.tolerance;
    o.pass = o.pass && ok;
    o.detail += Format(" %s %.1e%s;", gc.name, worst, ok ? "" : " (over)");
  }
  o.detail = Format("worst relative error over %d instances each:", kGradientInstances) +
             o.detail;
  return o;
}

// --- 5: codec round trip ---------------------------------------------------

Outcome Criterion5() {
  std::mt19937 rng(5005);
  std::uniform_int_distribution<int> side(1, 80);
  int mismatched = 0;
  for (int i = 0; i < kRoundTripCodes; ++i) {
    const int ch = i % 2 ? 3 : 1;
    const Sampling sampling = ch == 3 && i % 4 == 1 ? Sampling::k420 : Sampling::k444;
    const CompressedImage code = RandomCode(side(rng), side(rng), ch, sampling, rng);
    if (!(ParseJfif(SerializeJfif(code)) == code)) ++mismatched;
  }
  Outcome o;
  double worst = 0.0;
  std::string values;
  const std::vector<std::pair<std::string, std::string>> refs = {
      {"astronaut-q10", ".ppm"}, {"rocket-q10", ".ppm"},      {"ihc-q10", ".ppm"},
      {"chelsea-q10-444", ".ppm"}, {"hubble-q10-restart", ".ppm"},
      {"camera-q10", ".pgm"},      {"brick-q10", ".pgm"}};
  for (const auto& [name, ext] : refs) {
    const PixelImage ours =
        DecodeStandard(ParseJfif(ReadFileBytes(ReferencePath(name + ".jpg"))));
    const double d = MaxAbsDifference(ours, ReadImageFile(ReferencePath(name + ext)));
    worst = std::max(worst, d);
    values += Format(" %s %.0f;", name.c_str(), d);
  }
  o.pass = mismatched == 0 && worst <= kReferenceDecodeTolerance;
  o.detail = Format("round trip mismatches %d/%d, reference decode max diff %.0f (limit %.0f):",
                    mismatched, kRoundTripCodes, worst, kReferenceDecodeTolerance) +
             values;
  return o;
}

// --- 6: tool efficacy ------------------------------------------------------

double MeanMaskedL1(const PixelImage& a, const PixelImage& b, const RegionMask& mask) {
  double s = 0.0, w = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) {
        s += mask.at(x, y) * std::abs(a.at(c, x, y) - b.at(c, x, y));
        w += mask.at(x, y);
      }
    }
  }
  return s / w;
}

// Exhaustive search with its own paste loop and residual sum.
std::array<double, 64> OracleResiduals(const PixelImage& base, const PixelImage& content,
                                       const CompressedImage& code, int tx, int ty) {
  std::array<double, 64> out{};
  for (int dy = 0; dy < 8; ++dy) {
    for (int dx = 0; dx < 8; ++dx) {
      PixelImage desired = base;
      for (int c = 0; c < base.channels(); ++c)
        for (int y = 0; y < content.height(); ++y)
          for (int x = 0; x < content.width(); ++x)
            if (tx + dx + x < base.width() && ty + dy + y < base.height())
              desired.at(c, tx + dx + x, ty + dy + y) = content.at(c, x, y);
      const PixelImage projected = ProjectToConsistent(desired, code).pixels;
      double ss = 0.0;
      for (int c = 0; c < base.channels(); ++c)
        for (int y = 0; y < base.height(); ++y)
          for (int x = 0; x < base.width(); ++x)
            ss += std::pow(desired.at(c, x, y) - projected.at(c, x, y), 2);
      out[dy * 8 + dx] = std::sqrt(ss);
    }
  }
  return out;
}

Outcome Criterion6() {
  Outcome o;
  int unverified = 0;

  // TV on a heavily quantized crop.
  const CompressedImage tv_code =
      EncodePipeline(LoadFixture("camera").Cropped(0, 0, 64, 64), kToolQuality, Sampling::k444);
  const RegionMask full = RegionMask::Full(64, 64);
  const LatentField neutral = LatentField::Neutral(tv_code);
  const double before = EvalTv(Reconstruct(tv_code, neutral).pixels, full).value;
  const OptimizeResult tv = Optimize(tv_code, neutral, {{TvTool{}, 1.0}}, full,
                                     OptimizeConfig{.steps = kTvStepLimit});
  const ConsistentImage tv_out = Reconstruct(tv_code, tv.latent);
  const double reduction = 1.0 - EvalTv(tv_out.pixels, full).value / before;
  unverified += !OutputConsistent(tv_code, tv_out);
  const bool tv_ok = reduction >= kTvReductionFloor && tv.trace.steps_run <= kTvStepLimit;

  // Shift search against the exhaustive oracle.
  std::vector<std::string> names = ColorFixtureNames();
  for (const auto& g : GrayFixtureNames()) names.push_back(g);
  std::mt19937 rng(6006);
  std::uniform_int_distribution<int> offset(0, kImprintShiftRange - 1);
  int shift_mismatch = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < kImprintFixtures; ++i) {
    const Sampling sampling = i % 2 ? Sampling::k420 : Sampling::k444;
    const CompressedImage code =
        EncodePipeline(LoadFixture(names[i % names.size()]).Cropped(0, 0, 64, 64), 40, sampling);
    const PixelImage current = Reconstruct(code, LatentField::Neutral(code)).pixels;
    const int ox = offset(rng), oy = offset(rng);
    const PixelImage content = current.Cropped(16 + ox, 16 + oy, 20, 20);
    const ShiftSearchResult r = ImprintShiftSearch(current, content, code, {16, 16, 20, 20});
    const auto oracle = OracleResiduals(current, content, code, 16, 16);
    const int best =
        static_cast<int>(std::min_element(oracle.begin(), oracle.end()) - oracle.begin());
    for (int k = 0; k < 64; ++k)
      worst_gap = std::max(worst_gap, std::abs(r.residuals[k] - oracle[k]) / (1 + oracle[k]));
    if (r.dy * 8 + r.dx != best || worst_gap > kShiftResidualTolerance) ++shift_mismatch;
    const ConsistentImage placed =
        ProjectToConsistent(PasteContent(current, content, 16 + r.dx, 16 + r.dy), code);
    unverified += !OutputConsistent(code, placed);
  }

  // Diverse alternatives on a qf 5 ramp.
  PixelImage ramp(32, 32, 3);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) ramp.at(c, x, y) = 100 + x + 0.5 * y + 10 * c;
  const CompressedImage ramp_code = EncodePipeline(ramp, kToolQuality, Sampling::k420);
  const RegionMask mask = RegionMask::FromRect(32, 32, {8, 8, 16, 16});
  const LatentField start = LatentField::Neutral(ramp_code);
  const PixelImage x0 = Reconstruct(ramp_code, start).pixels;
  const auto outputs = [&](double proximity) {
    std::vector<PixelImage> out;
    for (const auto& u : DiverseAlternatives(ramp_code, start, mask, kDiverseCount,
                                             proximity, OptimizeConfig{})
                             .latents) {
      const ConsistentImage img = Reconstruct(ramp_code, u);
      unverified += !OutputConsistent(ramp_code, img);
      out.push_back(img.pixels);
    }
    return out;
  };
  const auto mean_to_x0 = [&](const std::vector<PixelImage>& outs) {
    double s = 0.0;
    for (const auto& x : outs) s += MeanMaskedL1(x, x0, mask);
    return s / outs.size();
  };
  const auto free_outs = outputs(0.0);
  const auto tight_outs = outputs(kTightProximity);
  double min_pairwise = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < free_outs.size(); ++i)
    for (size_t j = i + 1; j < free_outs.size(); ++j)
      min_pairwise = std::min(min_pairwise, MeanMaskedL1(free_outs[i], free_outs[j], mask));
  const double free_dist = mean_to_x0(free_outs), tight_dist = mean_to_x0(tight_outs);
  const bool diverse_ok = min_pairwise > 0.0 && tight_dist < free_dist;

  o.pass = tv_ok && shift_mismatch == 0 && diverse_ok && unverified == 0;
  o.detail = Format(
      "tv reduction %.3f in %d steps (floor %.2f); shift search mismatches %d/%d "
      "(residual gap %.1e); diversity min pairwise %.3f, to x0 %.3f at 0 vs %.3f at %.0e; "
      "unverified outputs %d",
      reduction, tv.trace.steps_run, kTvReductionFloor, shift_mismatch, kImprintFixtures,
      worst_gap, min_pairwise, free_dist, tight_dist, kTightProximity, unverified);
  return o;
}

// --- 7: CLI determinism ----------------------------------------------------

int RunCommand(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome Criterion7() {
  const fs::path dir = fs::temp_directory_path() /
                       ("ejpeg-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return (dir / name).string(); };
  const CompressedImage code =
      EncodePipeline(LoadFixture("chelsea").Cropped(0, 0, 64, 64), kToolQuality, Sampling::k420);
  WriteFileBytes(path("in.jpg"), SerializeJfif(code));
  WriteImageFile(path("mask.pgm"), MaskToImage(RegionMask::FromRect(64, 64, {8, 8, 40, 32})));
  const std::string objectives[] = {
      R"([{"tool":"tv"},{"tool":"range","weight":10}])",
      R"({"tool":"diversity","count":3,"proximity":0.1})"};
  Outcome o;
  int differing = 0, failed_runs = 0, files = 0;
  for (int k = 0; k < 2; ++k) {
    const std::string objective = path("objective-" + std::to_string(k) + ".json");
    WriteFileBytes(objective, std::vector<uint8_t>(objectives[k].begin(), objectives[k].end()));
    std::vector<std::string> snapshots;
    for (const char* run : {"a", "b"}) {
      const std::string latent = path(std::string(run) + std::to_string(k) + ".f64");
      const std::string cmd = std::string(EJPEG_CLI_PATH) + " optimize " + path("in.jpg") +
                              " --objective @" + objective + " --mask " + path("mask.pgm") +
                              " --seed 1234 --steps 60 --latent-out " + latent + " > " +
                              path("out.txt") + " 2>&1";
      if (RunCommand(cmd) != 0) ++failed_runs;
      snapshots.push_back(latent);
    }
    const int outputs = k == 0 ? 1 : 3;
    for (int i = 0; i < outputs; ++i) {
      const auto indexed = [&](const std::string& p) {
        return outputs == 1 ? p : p.substr(0, p.size() - 4) + "-" + std::to_string(i) + ".f64";
      };
      const std::string a = indexed(snapshots[0]), b = indexed(snapshots[1]);
      ++files;
      if (!fs::exists(a) || !fs::exists(b) || ReadFileBytes(a) != ReadFileBytes(b) ||
          ReadFileBytes(a).empty()) {
        ++differing;
        continue;
      }
      if (!VerifyConsistency(LatentToDct(code, ParseLatent(ReadFileBytes(a), code)), code)
               .consistent())
        ++differing;
    }
  }
  fs::remove_all(dir);
  o.pass = differing == 0 && failed_runs == 0;
  o.detail = Format("snapshot pairs %d, differing or unverified %d, failed runs %d", files,
                    differing, failed_runs);
  return o;
}

}  // namespace
}  // namespace ejpeg

int main(int argc, char** argv) {
  CLI::App app{"ejpeg acceptance suite"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")
      ->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7};
  const std::set<int> chosen(selected.begin(), selected.end());

  const std::array<ejpeg::Outcome (*)(), 7> criteria = {
      ejpeg::Criterion1, ejpeg::Criterion2, ejpeg::Criterion3, ejpeg::Criterion4,
      ejpeg::Criterion5, ejpeg::Criterion6, ejpeg::Criterion7};
  bool all = true;
  for (int n : chosen) {
    ejpeg::Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
