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

#include "ejpeg/optimizer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "ejpeg/classifier.h"
#include "ejpeg/error.h"

namespace ejpeg {
namespace {

using Trainable = std::vector<std::vector<uint8_t>>;
using Objective =
    std::function<double(const std::vector<LatentField>&, std::vector<LatentField>*)>;

// Calls fn(plane, index) for every latent entry of a trainable block.
template <typename Fn>
void ForEachTrainable(const Trainable& trainable, Fn fn) {
  for (size_t p = 0; p < trainable.size(); ++p) {
    for (size_t b = 0; b < trainable[p].size(); ++b) {
      if (!trainable[p][b]) continue;
      for (size_t i = b * 64; i < b * 64 + 64; ++i) fn(p, i);
    }
  }
}

LatentField ZerosLike(const LatentField& f) {
  LatentField z = f;
  for (auto& p : z.planes) std::fill(p.begin(), p.end(), 0.0);
  return z;
}

OptimizeTrace RunAdam(std::vector<LatentField>& params, const Trainable& trainable,
                      const OptimizeConfig& config, const Objective& objective,
                      const std::function<bool(int, double)>& on_step) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<LatentField> m, v;
  for (const auto& p : params) {
    m.push_back(ZerosLike(p));
    v.push_back(ZerosLike(p));
  }
  OptimizeTrace trace;
  std::vector<LatentField> grads;
  double b1t = 1.0, b2t = 1.0;
  for (int t = 1; t <= config.steps; ++t) {
    grads.clear();
    const double value = objective(params, &grads);
    if (!std::isfinite(value)) {
      Fail(ErrorCode::kNumerical,
           "objective is not finite at step " + std::to_string(t));
    }
    trace.values.push_back(value);
    b1t *= config.beta1;
    b2t *= config.beta2;
    for (size_t k = 0; k < params.size(); ++k) {
      ForEachTrainable(trainable, [&](size_t p, size_t i) {
        const double g = grads[k].planes[p][i];
        if (!std::isfinite(g)) {
          Fail(ErrorCode::kNumerical,
               "non-finite gradient at step " + std::to_string(t) + ", plane " +
                   std::to_string(p) + ", coefficient " + std::to_string(i));
        }
        double& mi = m[k].planes[p][i];
        double& vi = v[k].planes[p][i];
        mi = config.beta1 * mi + (1.0 - config.beta1) * g;
        vi = config.beta2 * vi + (1.0 - config.beta2) * g * g;
        const double mhat = mi / (1.0 - b1t);
        const double vhat = vi / (1.0 - b2t);
        params[k].planes[p][i] -=
            config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
      });
    }
    trace.steps_run = t;
    if (on_step && !on_step(t, value)) {
      trace.cancelled = true;
      break;
    }
    const int w = config.early_stop_window;
    if (config.early_stop_tolerance > 0.0 && t > w) {
      const double prev = trace.values[t - 1 - w];
      if (prev - value <= config.early_stop_tolerance * std::abs(prev)) {
        trace.early_stopped = true;
        break;
      }
    }
  }
  trace.final_value = objective(params, nullptr);
  trace.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return trace;
}

RegionMask RequireMask(const ResourceResolver& resolver, const std::string& name,
                       int width, int height) {
  if (!resolver.mask) {
    Fail(ErrorCode::kInvalidArgument, "no mask resolver for '" + name + "'");
  }
  RegionMask m = resolver.mask(name);
  if (m.width() != width || m.height() != height) {
    Fail(ErrorCode::kDimensionMismatch, "mask '" + name + "' has the wrong size");
  }
  return m;
}

}  // namespace

void OptimizeConfig::Validate() const {
  if (steps < 1) Fail(ErrorCode::kInvalidArgument, "steps must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kInvalidArgument, "learning rate must be > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "Adam betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) Fail(ErrorCode::kInvalidArgument, "epsilon must be > 0");
  if (!(early_stop_tolerance >= 0.0) || early_stop_window < 1) {
    Fail(ErrorCode::kInvalidArgument, "invalid early-stop settings");
  }
}

std::string OptimizeTrace::ToCsv() const {
  std::string out = "step,value\n";
  char line[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.17g\n", i, values[i]);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%d,%.17g\n", steps_run, final_value);
  out += line;
  return out;
}

Trainable TrainableBlocks(const CompressedImage& code, const RegionMask& mask) {
  if (mask.width() != code.width || mask.height() != code.height) {
    Fail(ErrorCode::kDimensionMismatch, "mask size differs from image size");
  }
  Trainable out;
  bool any = false;
  for (size_t p = 0; p < code.planes.size(); ++p) {
    const auto& plane = code.planes[p];
    const int f = code.BlockFootprint(static_cast<int>(p));
    std::vector<uint8_t> touched(plane.block_count(), 0);
    for (int r = 0; r < plane.block_rows; ++r) {
      for (int c = 0; c < plane.block_cols; ++c) {
        bool hit = false;
        for (int y = r * f; y < std::min((r + 1) * f, code.height) && !hit; ++y) {
          for (int x = c * f; x < std::min((c + 1) * f, code.width) && !hit; ++x) {
            hit = mask.Selected(x, y);
          }
        }
        touched[r * plane.block_cols + c] = hit;
      }
    }
    std::vector<uint8_t> grown(plane.block_count(), 0);
    for (int r = 0; r < plane.block_rows; ++r) {
      for (int c = 0; c < plane.block_cols; ++c) {
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= plane.block_rows || cc >= plane.block_cols)
              continue;
            if (touched[rr * plane.block_cols + cc]) grown[r * plane.block_cols + c] = 1;
          }
        }
        any |= grown[r * plane.block_cols + c] != 0;
      }
    }
    out.push_back(std::move(grown));
  }
  if (!any) Fail(ErrorCode::kInvalidArgument, "empty effective mask");
  return out;
}

ObjectiveProgram::ObjectiveProgram(const CompressedImage& code,
                                   const PixelImage& x0, const RegionMask& mask,
                                   const std::vector<WeightedTool>& tools,
                                   const ResourceResolver& resolver)
    : code_(code), width_(x0.width()), height_(x0.height()), channels_(x0.channels()) {
  if (tools.empty()) Fail(ErrorCode::kInvalidArgument, "no objectives given");
  if (mask.width() != x0.width() || mask.height() != x0.height()) {
    Fail(ErrorCode::kDimensionMismatch, "mask size differs from image size");
  }
  if (!mask.AnyPositive()) Fail(ErrorCode::kInvalidArgument, "mask has no positive weight");
  for (const auto& wt : tools) {
    if (!(wt.weight >= 0.0) || !std::isfinite(wt.weight)) {
      Fail(ErrorCode::kInvalidArgument, "objective weights must be finite and >= 0");
    }
    if (wt.weight > 0.0) all_zero_ = false;
    Term term{ToolName(wt.tool), wt.weight, {}};
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, VarianceTool>) {
            term.eval = [=](const PixelImage& x) {
              return EvalVariance(x, x0, mask, t.delta, t.direction, t.mode);
            };
          } else if constexpr (std::is_same_v<T, TvTool>) {
            term.eval = [=](const PixelImage& x) { return EvalTv(x, mask); };
          } else if constexpr (std::is_same_v<T, L1TargetTool>) {
            if (!resolver.image) {
              Fail(ErrorCode::kInvalidArgument, "no image resolver for '" + t.target + "'");
            }
            const PixelImage raw = resolver.image(t.target);
            if (!raw.SameShape(x0)) {
              Fail(ErrorCode::kDimensionMismatch,
                   "target '" + t.target + "' does not match the image shape");
            }
            const PixelImage target = ProjectToConsistent(raw, code).pixels;
            term.eval = [=](const PixelImage& x) { return EvalL1Target(x, target, mask); };
          } else if constexpr (std::is_same_v<T, MagnitudeTool>) {
            term.eval = [=](const PixelImage& x) {
              return EvalMagnitude(x, x0, mask, t.delta, t.direction);
            };
          } else if constexpr (std::is_same_v<T, PatchDictTool>) {
            const RegionMask source_mask =
                RequireMask(resolver, t.source_mask, x0.width(), x0.height());
            const PatchSet source =
                ExtractPatches(x0, source_mask, kSourcePatchStride, t.ignore_variance);
            term.eval = [=](const PixelImage& x) {
              return EvalPatchDict(x, x0, source, mask);
            };
          } else if constexpr (std::is_same_v<T, PeriodicityTool>) {
            std::vector<PeriodVector> dirs = t.directions;
            for (Axis a : t.auto_axes) {
              const int period = AutoPeriod(x0, mask, a).period;
              dirs.push_back(a == Axis::kHorizontal ? PeriodVector{period, 0}
                                                    : PeriodVector{0, period});
            }
            term.eval = [=](const PixelImage& x) { return EvalPeriodicity(x, mask, dirs); };
          } else if constexpr (std::is_same_v<T, DiversityTool>) {
            Fail(ErrorCode::kInvalidArgument,
                 "diversity produces several outputs; run it as diverse alternatives");
          } else if constexpr (std::is_same_v<T, RangeTool>) {
            term.eval = [=](const PixelImage& x) { return EvalRange(x, mask, t.lo, t.hi); };
          } else if constexpr (std::is_same_v<T, HsvTool>) {
            const PixelImage target =
                ProjectToConsistent(BuildHsvTarget(x0, mask, t.attribute, t.amount), code)
                    .pixels;
            term.eval = [=](const PixelImage& x) { return EvalL1Target(x, target, mask); };
          } else if constexpr (std::is_same_v<T, ClassifierTool>) {
            auto hook = FindClassifier(t.hook);
            if (t.cls < 0 || t.cls >= hook->class_count()) {
              Fail(ErrorCode::kInvalidArgument, "class index out of range");
            }
            term.eval = [=](const PixelImage& x) {
              return EvalClassifier(x, mask, *hook, t.cls);
            };
          }
        },
        wt.tool);
    terms_.push_back(std::move(term));
  }
}

ObjectiveValue ObjectiveProgram::EvaluatePixels(const PixelImage& x) const {
  ObjectiveValue total{0.0, PixelImage(width_, height_, channels_)};
  for (const auto& term : terms_) {
    if (term.weight == 0.0) continue;
    const ObjectiveValue v = term.eval(x);
    total.value += term.weight * v.value;
    for (int c = 0; c < channels_; ++c) {
      auto dst = total.gradient.plane(c).values();
      auto src = v.gradient.plane(c).values();
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += term.weight * src[i];
    }
  }
  return total;
}

double ObjectiveProgram::EvaluateLatent(const LatentField& latent,
                                        LatentField* gradient) const {
  const ConsistentImage recon = Reconstruct(code_, latent);
  const ObjectiveValue v = EvaluatePixels(recon.pixels);
  if (gradient) *gradient = LatentGradient(code_, latent, v.gradient);
  return v.value;
}

OptimizeResult Optimize(const CompressedImage& code, const LatentField& start,
                        const std::vector<WeightedTool>& tools,
                        const RegionMask& mask, const OptimizeConfig& config,
                        const ResourceResolver& resolver,
                        const ProgressCallback& progress) {
  config.Validate();
  if (!start.Matches(code)) {
    Fail(ErrorCode::kDimensionMismatch, "latent does not match the code");
  }
  const Trainable trainable = TrainableBlocks(code, mask);
  const PixelImage x0 = Reconstruct(code, start).pixels;
  const ObjectiveProgram program(code, x0, mask, tools, resolver);
  std::vector<LatentField> params = {start};
  const Objective objective = [&](const std::vector<LatentField>& p,
                                  std::vector<LatentField>* grads) {
    if (!grads) return program.EvaluateLatent(p[0], nullptr);
    grads->resize(1);
    return program.EvaluateLatent(p[0], &(*grads)[0]);
  };
  std::function<bool(int, double)> on_step;
  if (progress) {
    on_step = [&](int t, double value) { return progress(t, value, params[0]); };
  }
  OptimizeTrace trace = RunAdam(params, trainable, config, objective, on_step);
  return {std::move(params[0]), std::move(trace)};
}

std::vector<ClassOutcome> ExploreClasses(const CompressedImage& code,
                                         const LatentField& start,
                                         const RegionMask& mask,
                                         const std::string& hook_id,
                                         std::vector<int> classes,
                                         const OptimizeConfig& config,
                                         const ProgressCallback& progress) {
  const auto hook = FindClassifier(hook_id);
  if (classes.empty()) {
    for (int d = 0; d < hook->class_count(); ++d) classes.push_back(d);
  }
  for (int d : classes) {
    if (d < 0 || d >= hook->class_count()) {
      Fail(ErrorCode::kInvalidArgument, "class index out of range");
    }
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<ClassOutcome> out;
  int offset = 0;
  for (int d : classes) {
    ProgressCallback inner;
    if (progress) {
      inner = [&](int t, double v, const LatentField& u) {
        return progress(offset + t, v, u);
      };
    }
    OptimizeResult r = Optimize(code, start, {{ClassifierTool{hook_id, d}, 1.0}},
                                mask, config, {}, inner);
    ClassOutcome o;
    o.cls = d;
    o.output = Reconstruct(code, r.latent).pixels;
    o.scores = ClassifierScores(o.output, mask, *hook);
    o.score = o.scores[d];
    o.latent = std::move(r.latent);
    o.trace = std::move(r.trace);
    offset += o.trace.steps_run;
    const bool cancelled = o.trace.cancelled;
    out.push_back(std::move(o));
    if (cancelled) break;
  }
  return out;
}

DiverseResult DiverseAlternatives(const CompressedImage& code,
                                  const LatentField& start,
                                  const RegionMask& mask, int count,
                                  double proximity, const OptimizeConfig& config,
                                  const ProgressCallback& progress) {
  config.Validate();
  if (count < 2) Fail(ErrorCode::kInvalidArgument, "diversity needs at least 2 outputs");
  if (!(proximity >= 0.0) || !std::isfinite(proximity)) {
    Fail(ErrorCode::kInvalidArgument, "proximity weight must be finite and >= 0");
  }
  if (!start.Matches(code)) {
    Fail(ErrorCode::kDimensionMismatch, "latent does not match the code");
  }
  const Trainable trainable = TrainableBlocks(code, mask);
  const PixelImage x0 = Reconstruct(code, start).pixels;
  std::vector<LatentField> params;
  for (int i = 0; i < count; ++i) {
    LatentField copy = start;
    std::seed_seq seq{static_cast<uint32_t>(config.seed),
                      static_cast<uint32_t>(config.seed >> 32),
                      static_cast<uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> jitter(-kDiversityJitter, kDiversityJitter);
    ForEachTrainable(trainable, [&](size_t p, size_t k) { copy.planes[p][k] += jitter(rng); });
    params.push_back(std::move(copy));
  }
  const Objective objective = [&](const std::vector<LatentField>& p,
                                  std::vector<LatentField>* grads) {
    std::vector<PixelImage> outputs;
    for (const auto& u : p) outputs.push_back(Reconstruct(code, u).pixels);
    const DiversityValue d = EvalDiversity(outputs, x0, mask, proximity);
    if (grads) {
      grads->clear();
      for (size_t i = 0; i < p.size(); ++i) {
        grads->push_back(LatentGradient(code, p[i], d.gradients[i]));
      }
    }
    return d.value;
  };
  std::function<bool(int, double)> on_step;
  if (progress) {
    on_step = [&](int t, double value) { return progress(t, value, params[0]); };
  }
  OptimizeTrace trace = RunAdam(params, trainable, config, objective, on_step);
  return {std::move(params), std::move(trace)};
}

}  // namespace ejpeg
