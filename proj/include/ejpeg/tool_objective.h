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

#ifndef EJPEG_TOOL_OBJECTIVE_H_
#define EJPEG_TOOL_OBJECTIVE_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ejpeg/error.h"
#include "ejpeg/objectives.h"

namespace ejpeg {

// Image and mask parameters are names; front-ends resolve them (CLI: file
// paths, service: session resources).
struct VarianceTool {
  double delta = 0.0;
  Direction direction = Direction::kIncrease;
  VarianceMode mode = VarianceMode::kRelative;
  bool operator==(const VarianceTool&) const = default;
};
struct TvTool {
  bool operator==(const TvTool&) const = default;
};
struct L1TargetTool {
  std::string target;
  bool operator==(const L1TargetTool&) const = default;
};
struct MagnitudeTool {
  double delta = 0.0;
  Direction direction = Direction::kIncrease;
  bool operator==(const MagnitudeTool&) const = default;
};
struct PatchDictTool {
  std::string source_mask;
  bool ignore_variance = false;
  bool operator==(const PatchDictTool&) const = default;
};
// Either explicit vectors or axes whose period is estimated on the
// pre-edit output.
struct PeriodicityTool {
  std::vector<PeriodVector> directions;
  std::vector<Axis> auto_axes;
  bool operator==(const PeriodicityTool&) const = default;
};
struct DiversityTool {
  int count = 2;
  double proximity = 0.0;
  bool operator==(const DiversityTool&) const = default;
};
struct RangeTool {
  double lo = kRangeLow;
  double hi = kRangeHigh;
  bool operator==(const RangeTool&) const = default;
};
struct HsvTool {
  HsvAttribute attribute = HsvAttribute::kHue;
  double amount = 0.0;
  bool operator==(const HsvTool&) const = default;
};
struct ClassifierTool {
  std::string hook = "toy";
  int cls = 0;
  bool operator==(const ClassifierTool&) const = default;
};

using ToolObjective =
    std::variant<VarianceTool, TvTool, L1TargetTool, MagnitudeTool,
                 PatchDictTool, PeriodicityTool, DiversityTool, RangeTool,
                 HsvTool, ClassifierTool>;

struct WeightedTool {
  ToolObjective tool;
  double weight = 1.0;
  bool operator==(const WeightedTool&) const = default;
};

// Name used in the "tool" field: variance, tv, l1_target, magnitude,
// patch_dict, periodicity, diversity, range, hsv, classifier.
std::string ToolName(const ToolObjective& tool);

// Invalid objective document. path is a JSON pointer to the offending value.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : Error(ErrorCode::kInvalidArgument,
              "objective schema error at " + (path.empty() ? "/" : path) +
                  ": " + message),
        path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Accepts one tool object, an array of them, or {"objectives": [...]}.
// Throws SchemaError.
std::vector<WeightedTool> ParseObjectives(std::string_view json_text);
// Canonical form: {"objectives": [...]} with every field spelled out.
std::string ObjectivesToJson(const std::vector<WeightedTool>& tools);
// JSON Schema (draft 2020-12) describing the accepted documents.
std::string ObjectiveJsonSchema();

}  // namespace ejpeg

#endif  // EJPEG_TOOL_OBJECTIVE_H_
