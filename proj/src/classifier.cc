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

#include "ejpeg/classifier.h"

#include <cmath>
#include <map>
#include <mutex>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

// 5x7 glyphs, one row per string, '#' is ink.
const char* const kGlyphs[10][7] = {
    {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."},
    {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."},
    {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"},
    {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."},
    {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."},
    {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."},
    {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."},
    {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."},
    {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."},
    {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."},
};

struct Centered {
  std::vector<double> values;
  double norm = 0.0;
};

Centered Center(const Plane& p) {
  Centered c;
  double mean = 0.0;
  for (double v : p.values()) mean += v;
  mean /= p.size();
  c.values.reserve(p.size());
  for (double v : p.values()) {
    c.values.push_back(v - mean);
    c.norm += (v - mean) * (v - mean);
  }
  c.norm = std::sqrt(c.norm);
  return c;
}

// Below this centered norm a crop counts as uniform.
constexpr double kFlatNorm = 1e-9;

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const ClassifierHook>> hooks;
  Registry() { hooks["toy"] = std::make_shared<ToyTemplateClassifier>(); }
};

Registry& GetRegistry() {
  static Registry registry;
  return registry;
}

}  // namespace

void RegisterClassifier(const std::string& id,
                        std::shared_ptr<const ClassifierHook> hook) {
  Registry& r = GetRegistry();
  std::lock_guard<std::mutex> lock(r.mu);
  r.hooks[id] = std::move(hook);
}

std::shared_ptr<const ClassifierHook> FindClassifier(const std::string& id) {
  Registry& r = GetRegistry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.hooks.find(id);
  if (it == r.hooks.end()) {
    Fail(ErrorCode::kNotFound, "unknown classifier hook '" + id + "'");
  }
  return it->second;
}

std::vector<std::string> ClassifierIds() {
  Registry& r = GetRegistry();
  std::lock_guard<std::mutex> lock(r.mu);
  std::vector<std::string> ids;
  for (const auto& [id, hook] : r.hooks) ids.push_back(id);
  return ids;
}

ToyTemplateClassifier::ToyTemplateClassifier() {
  for (int d = 0; d < 10; ++d) {
    Plane t(16, 16, 0.0);
    // 10x14 glyph centered: 3 columns and 1 row of margin.
    for (int gy = 0; gy < 7; ++gy) {
      for (int gx = 0; gx < 5; ++gx) {
        if (kGlyphs[d][gy][gx] != '#') continue;
        for (int sy = 0; sy < 2; ++sy) {
          for (int sx = 0; sx < 2; ++sx) {
            t.at(3 + 2 * gx + sx, 1 + 2 * gy + sy) = 255.0;
          }
        }
      }
    }
    templates_.push_back(std::move(t));
  }
}

std::vector<double> ToyTemplateClassifier::Scores(const Plane& crop) const {
  if (crop.width() != 16 || crop.height() != 16) {
    Fail(ErrorCode::kDimensionMismatch, "toy classifier expects a 16x16 crop");
  }
  const Centered a = Center(crop);
  std::vector<double> scores(10, 0.0);
  if (a.norm < kFlatNorm) return scores;
  for (int d = 0; d < 10; ++d) {
    const Centered b = Center(templates_[d]);
    double dot = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    scores[d] = dot / (a.norm * b.norm);
  }
  return scores;
}

Plane ToyTemplateClassifier::ScoreGradient(const Plane& crop, int cls) const {
  if (cls < 0 || cls >= 10) {
    Fail(ErrorCode::kInvalidArgument, "class index out of range");
  }
  Plane g(16, 16, 0.0);
  const Centered a = Center(crop);
  if (a.norm < kFlatNorm) return g;
  const Centered b = Center(templates_[cls]);
  double dot = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  const double s = dot / (a.norm * b.norm);
  // d/da of a.b / (|a||b|), already orthogonal to the constant direction.
  auto out = g.values();
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = b.values[i] / (a.norm * b.norm) - s * a.values[i] / (a.norm * a.norm);
  }
  return g;
}

}  // namespace ejpeg
