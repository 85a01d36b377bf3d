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

#ifndef EJPEG_CLASSIFIER_H_
#define EJPEG_CLASSIFIER_H_

#include <memory>
#include <string>
#include <vector>

#include "ejpeg/image.h"

namespace ejpeg {

// A differentiable classifier over a fixed-size single-channel crop.
class ClassifierHook {
 public:
  virtual ~ClassifierHook() = default;
  virtual int class_count() const = 0;
  virtual int input_width() const = 0;
  virtual int input_height() const = 0;
  // Per-class scores for a crop of input_width() x input_height().
  virtual std::vector<double> Scores(const Plane& crop) const = 0;
  // Gradient of Scores(crop)[cls] with respect to the crop.
  virtual Plane ScoreGradient(const Plane& crop, int cls) const = 0;
};

// Process-wide registry. The toy hook is registered as "toy".
void RegisterClassifier(const std::string& id,
                        std::shared_ptr<const ClassifierHook> hook);
// Throws kNotFound for unknown ids.
std::shared_ptr<const ClassifierHook> FindClassifier(const std::string& id);
std::vector<std::string> ClassifierIds();

// Normalized cross-correlation against ten 16x16 digit templates (a 5x7
// pixel font drawn at 2x). Crops with zero variance score 0 for every class.
class ToyTemplateClassifier : public ClassifierHook {
 public:
  ToyTemplateClassifier();
  int class_count() const override { return 10; }
  int input_width() const override { return 16; }
  int input_height() const override { return 16; }
  std::vector<double> Scores(const Plane& crop) const override;
  Plane ScoreGradient(const Plane& crop, int cls) const override;

  // Template for a digit on a black (0) background with white (255) strokes.
  const Plane& Template(int digit) const { return templates_[digit]; }

 private:
  std::vector<Plane> templates_;
};

}  // namespace ejpeg

#endif  // EJPEG_CLASSIFIER_H_
