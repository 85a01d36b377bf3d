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

#ifndef EJPEG_OPTIMIZER_H_
#define EJPEG_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ejpeg/compressed_image.h"
#include "ejpeg/consistency.h"
#include "ejpeg/image.h"
#include "ejpeg/tool_objective.h"

namespace ejpeg {

struct OptimizeConfig {
  int steps = 200;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 0;
  // Stop when the objective improved by less than this fraction over the
  // last early_stop_window steps. 0 disables early stopping.
  double early_stop_tolerance = 1e-6;
  int early_stop_window = 20;

  // Throws kInvalidArgument for out-of-range settings.
  void Validate() const;
};

struct OptimizeTrace {
  std::vector<double> values;  // objective before each update
  double final_value = 0.0;    // objective at the returned latent
  int steps_run = 0;
  bool early_stopped = false;
  bool cancelled = false;
  double wall_seconds = 0.0;

  // "step,value" header, then the value after 0, 1, ..., steps_run updates
  // (the last row is final_value).
  std::string ToCsv() const;
};

struct OptimizeResult {
  LatentField latent;
  OptimizeTrace trace;
};

// Resolves names used by L1Target and PatchDict objectives.
struct ResourceResolver {
  std::function<PixelImage(const std::string&)> image;
  std::function<RegionMask(const std::string&)> mask;
};

// Called after each step with the step index (1-based), the objective value
// before the step and the updated latent. Returning false cancels.
using ProgressCallback =
    std::function<bool(int step, double value, const LatentField& latent)>;

// Per plane, per block: 1 when the block's pixel footprint (8x8, or 16x16
// for 4:2:0 chroma) touches a positive mask weight, grown by one block in
// every direction. Throws kInvalidArgument when nothing is trainable.
std::vector<std::vector<uint8_t>> TrainableBlocks(const CompressedImage& code,
                                                  const RegionMask& mask);

// Weighted sum of tool objectives bound to a code, a pre-edit output x0 and a
// mask. HSV tools become an L1 target toward the projected HSV edit; auto
// periodicity is estimated on x0. Diversity is not a single-output objective
// and is rejected here.
class ObjectiveProgram {
 public:
  ObjectiveProgram(const CompressedImage& code, const PixelImage& x0,
                   const RegionMask& mask, const std::vector<WeightedTool>& tools,
                   const ResourceResolver& resolver = {});

  ObjectiveValue EvaluatePixels(const PixelImage& x) const;
  // Objective of Reconstruct(code, latent); fills *gradient when given.
  double EvaluateLatent(const LatentField& latent, LatentField* gradient) const;
  bool all_zero_weight() const { return all_zero_; }

 private:
  struct Term {
    std::string name;
    double weight;
    std::function<ObjectiveValue(const PixelImage&)> eval;
  };
  CompressedImage code_;
  std::vector<Term> terms_;
  int width_, height_, channels_;
  bool all_zero_ = true;
};

// Adam on the latent field. Only trainable blocks change. Throws kNumerical
// when a gradient is not finite.
OptimizeResult Optimize(const CompressedImage& code, const LatentField& start,
                        const std::vector<WeightedTool>& tools,
                        const RegionMask& mask, const OptimizeConfig& config,
                        const ResourceResolver& resolver = {},
                        const ProgressCallback& progress = {});

struct ClassOutcome {
  int cls = 0;
  LatentField latent;
  PixelImage output;
  double score = 0.0;  // final score of cls
  std::vector<double> scores;
  OptimizeTrace trace;
};

// One independent run per class from the same start, ordered by class index.
// An empty class list means every class of the hook.
std::vector<ClassOutcome> ExploreClasses(const CompressedImage& code,
                                         const LatentField& start,
                                         const RegionMask& mask,
                                         const std::string& hook_id,
                                         std::vector<int> classes,
                                         const OptimizeConfig& config,
                                         const ProgressCallback& progress = {});

// Initial perturbation of each copy, uniform in [-a, a] on trainable entries.
constexpr double kDiversityJitter = 0.01;

struct DiverseResult {
  std::vector<LatentField> latents;
  OptimizeTrace trace;
};

// Joint Adam on count latent copies under EvalDiversity. Copy i is jittered
// with a generator seeded from (config.seed, i).
DiverseResult DiverseAlternatives(const CompressedImage& code,
                                  const LatentField& start,
                                  const RegionMask& mask, int count,
                                  double proximity, const OptimizeConfig& config,
                                  const ProgressCallback& progress = {});

}  // namespace ejpeg

#endif  // EJPEG_OPTIMIZER_H_
