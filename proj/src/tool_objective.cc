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

#include "ejpeg/tool_objective.h"

#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

namespace ejpeg {
namespace {

using nlohmann::json;

// Reader over one JSON object that tracks its pointer path and rejects
// unknown keys.
class Fields {
 public:
  Fields(const json& object, std::string path)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw SchemaError(path_, "expected an object");
  }

  std::string Path(const std::string& key) const { return path_ + "/" + key; }

  const json* Find(const std::string& key) {
    used_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  double Number(const std::string& key, std::optional<double> fallback,
                double min, bool min_inclusive = true) {
    const json* v = Find(key);
    if (!v) {
      if (!fallback) throw SchemaError(Path(key), "required number is missing");
      return *fallback;
    }
    if (!v->is_number()) throw SchemaError(Path(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw SchemaError(Path(key), "expected a finite number");
    if (min_inclusive ? d < min : d <= min) {
      throw SchemaError(Path(key), std::string("must be ") +
                                       (min_inclusive ? ">= " : "> ") +
                                       Format(min));
    }
    return d;
  }

  double AnyNumber(const std::string& key, std::optional<double> fallback) {
    return Number(key, fallback, -std::numeric_limits<double>::infinity());
  }

  int Integer(const std::string& key, std::optional<int> fallback, int min) {
    const json* v = Find(key);
    if (!v) {
      if (!fallback) throw SchemaError(Path(key), "required integer is missing");
      return *fallback;
    }
    if (!v->is_number_integer()) throw SchemaError(Path(key), "expected an integer");
    const auto i = v->get<int64_t>();
    if (i < min || i > std::numeric_limits<int>::max()) {
      throw SchemaError(Path(key), "must be an integer >= " + std::to_string(min));
    }
    return static_cast<int>(i);
  }

  std::string String(const std::string& key,
                     std::optional<std::string> fallback) {
    const json* v = Find(key);
    if (!v) {
      if (!fallback) throw SchemaError(Path(key), "required string is missing");
      return *fallback;
    }
    if (!v->is_string()) throw SchemaError(Path(key), "expected a string");
    std::string s = v->get<std::string>();
    if (s.empty()) throw SchemaError(Path(key), "must not be empty");
    return s;
  }

  std::string Choice(const std::string& key, std::optional<std::string> fallback,
                     const std::vector<std::string>& options) {
    std::string s = String(key, fallback);
    for (const auto& o : options) {
      if (s == o) return s;
    }
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    throw SchemaError(Path(key), "must be one of: " + list);
  }

  bool Bool(const std::string& key, bool fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw SchemaError(Path(key), "expected a boolean");
    return v->get<bool>();
  }

  void RejectUnknown() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.count(key)) throw SchemaError(Path(key), "unknown field");
    }
  }

 private:
  static std::string Format(double d) {
    json j = d;
    return j.dump();
  }

  const json& object_;
  std::string path_;
  std::set<std::string> used_;
};

Direction ParseDirection(Fields& f) {
  return f.Choice("direction", "increase", {"increase", "decrease"}) == "increase"
             ? Direction::kIncrease
             : Direction::kDecrease;
}

PeriodicityTool ParsePeriodicity(Fields& f) {
  PeriodicityTool t;
  const json* dirs = f.Find("directions");
  const json* axes = f.Find("auto");
  if ((dirs != nullptr) == (axes != nullptr)) {
    throw SchemaError(f.Path("directions"),
                      "exactly one of 'directions' or 'auto' is required");
  }
  if (dirs) {
    const std::string path = f.Path("directions");
    if (!dirs->is_array() || dirs->empty() || dirs->size() > 2) {
      throw SchemaError(path, "expected 1 or 2 period vectors");
    }
    for (size_t i = 0; i < dirs->size(); ++i) {
      const json& v = (*dirs)[i];
      const std::string vp = path + "/" + std::to_string(i);
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
          !v[1].is_number_integer()) {
        throw SchemaError(vp, "expected [dx, dy] integers");
      }
      PeriodVector pv{v[0].get<int>(), v[1].get<int>()};
      if (pv.dx == 0 && pv.dy == 0) throw SchemaError(vp, "period vector must be nonzero");
      t.directions.push_back(pv);
    }
  } else {
    const std::string path = f.Path("auto");
    if (!axes->is_string()) throw SchemaError(path, "expected \"x\", \"y\" or \"xy\"");
    const std::string s = axes->get<std::string>();
    if (s == "x") {
      t.auto_axes = {Axis::kHorizontal};
    } else if (s == "y") {
      t.auto_axes = {Axis::kVertical};
    } else if (s == "xy") {
      t.auto_axes = {Axis::kHorizontal, Axis::kVertical};
    } else {
      throw SchemaError(path, "expected \"x\", \"y\" or \"xy\"");
    }
  }
  return t;
}

WeightedTool ParseTool(const json& j, const std::string& path) {
  Fields f(j, path);
  WeightedTool out;
  const std::string tool =
      f.Choice("tool", std::nullopt,
               {"variance", "tv", "l1_target", "magnitude", "patch_dict",
                "periodicity", "diversity", "range", "hsv", "classifier"});
  out.weight = f.Number("weight", 1.0, 0.0);
  if (tool == "variance") {
    VarianceTool t;
    t.delta = f.Number("delta", std::nullopt, 0.0);
    t.direction = ParseDirection(f);
    t.mode = f.Choice("mode", "relative", {"relative", "absolute"}) == "relative"
                 ? VarianceMode::kRelative
                 : VarianceMode::kAbsolute;
    out.tool = t;
  } else if (tool == "tv") {
    out.tool = TvTool{};
  } else if (tool == "l1_target") {
    out.tool = L1TargetTool{f.String("target", std::nullopt)};
  } else if (tool == "magnitude") {
    MagnitudeTool t;
    t.delta = f.Number("delta", std::nullopt, 0.0);
    t.direction = ParseDirection(f);
    if (t.direction == Direction::kDecrease && t.delta > 1.0) {
      throw SchemaError(f.Path("delta"), "decrease needs delta <= 1");
    }
    out.tool = t;
  } else if (tool == "patch_dict") {
    PatchDictTool t;
    t.source_mask = f.String("source_mask", std::nullopt);
    t.ignore_variance = f.Bool("ignore_variance", false);
    out.tool = t;
  } else if (tool == "periodicity") {
    out.tool = ParsePeriodicity(f);
  } else if (tool == "diversity") {
    DiversityTool t;
    t.count = f.Integer("count", 2, 2);
    t.proximity = f.Number("proximity", 0.0, 0.0);
    out.tool = t;
  } else if (tool == "range") {
    RangeTool t;
    t.lo = f.AnyNumber("lo", kRangeLow);
    t.hi = f.AnyNumber("hi", kRangeHigh);
    if (!(t.lo < t.hi)) throw SchemaError(f.Path("hi"), "must be greater than lo");
    out.tool = t;
  } else if (tool == "hsv") {
    HsvTool t;
    t.attribute = ParseHsvAttribute(
        f.Choice("attribute", std::nullopt, {"hue", "saturation", "value"}));
    t.amount = f.AnyNumber("amount", std::nullopt);
    out.tool = t;
  } else {
    ClassifierTool t;
    t.hook = f.String("hook", "toy");
    t.cls = f.Integer("class", std::nullopt, 0);
    out.tool = t;
  }
  f.RejectUnknown();
  return out;
}

const char* DirectionName(Direction d) {
  return d == Direction::kIncrease ? "increase" : "decrease";
}

json ToolToJson(const WeightedTool& w) {
  json j;
  j["tool"] = ToolName(w.tool);
  j["weight"] = w.weight;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, VarianceTool>) {
          j["delta"] = t.delta;
          j["direction"] = DirectionName(t.direction);
          j["mode"] = t.mode == VarianceMode::kRelative ? "relative" : "absolute";
        } else if constexpr (std::is_same_v<T, L1TargetTool>) {
          j["target"] = t.target;
        } else if constexpr (std::is_same_v<T, MagnitudeTool>) {
          j["delta"] = t.delta;
          j["direction"] = DirectionName(t.direction);
        } else if constexpr (std::is_same_v<T, PatchDictTool>) {
          j["source_mask"] = t.source_mask;
          j["ignore_variance"] = t.ignore_variance;
        } else if constexpr (std::is_same_v<T, PeriodicityTool>) {
          if (!t.auto_axes.empty()) {
            std::string axes;
            for (Axis a : t.auto_axes) axes += a == Axis::kHorizontal ? "x" : "y";
            j["auto"] = axes;
          } else {
            json dirs = json::array();
            for (const auto& v : t.directions) dirs.push_back({v.dx, v.dy});
            j["directions"] = dirs;
          }
        } else if constexpr (std::is_same_v<T, DiversityTool>) {
          j["count"] = t.count;
          j["proximity"] = t.proximity;
        } else if constexpr (std::is_same_v<T, RangeTool>) {
          j["lo"] = t.lo;
          j["hi"] = t.hi;
        } else if constexpr (std::is_same_v<T, HsvTool>) {
          j["attribute"] = HsvAttributeName(t.attribute);
          j["amount"] = t.amount;
        } else if constexpr (std::is_same_v<T, ClassifierTool>) {
          j["hook"] = t.hook;
          j["class"] = t.cls;
        }
      },
      w.tool);
  return j;
}

}  // namespace

std::string ToolName(const ToolObjective& tool) {
  static const char* const kNames[] = {
      "variance", "tv",        "l1_target", "magnitude", "patch_dict",
      "periodicity", "diversity", "range",  "hsv",       "classifier"};
  return kNames[tool.index()];
}

std::vector<WeightedTool> ParseObjectives(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  std::vector<WeightedTool> out;
  if (doc.is_object() && !doc.contains("tool")) {
    Fields f(doc, "");
    const json* list = f.Find("objectives");
    if (!list) throw SchemaError("/objectives", "required array is missing");
    f.RejectUnknown();
    doc = *list;
    if (!doc.is_array()) throw SchemaError("/objectives", "expected an array");
    for (size_t i = 0; i < doc.size(); ++i) {
      out.push_back(ParseTool(doc[i], "/objectives/" + std::to_string(i)));
    }
  } else if (doc.is_array()) {
    for (size_t i = 0; i < doc.size(); ++i) {
      out.push_back(ParseTool(doc[i], "/" + std::to_string(i)));
    }
  } else {
    out.push_back(ParseTool(doc, ""));
  }
  if (out.empty()) throw SchemaError("", "at least one objective is required");
  return out;
}

std::string ObjectivesToJson(const std::vector<WeightedTool>& tools) {
  json list = json::array();
  for (const auto& t : tools) list.push_back(ToolToJson(t));
  return json{{"objectives", list}}.dump();
}

std::string ObjectiveJsonSchema() {
  auto tool = [](const char* name, json props, json required) {
    props["tool"] = {{"const", name}};
    props["weight"] = {{"type", "number"}, {"minimum", 0}, {"default", 1}};
    required.insert(required.begin(), "tool");
    return json{{"type", "object"},
                {"properties", props},
                {"required", required},
                {"additionalProperties", false}};
  };
  const json direction = {{"enum", {"increase", "decrease"}}, {"default", "increase"}};
  const json delta = {{"type", "number"}, {"minimum", 0}};
  const json vec = {{"type", "array"},
                    {"items", {{"type", "integer"}}},
                    {"minItems", 2},
                    {"maxItems", 2}};
  const json one_tool = {
      {"oneOf",
       {
           tool("variance",
                {{"delta", delta},
                 {"direction", direction},
                 {"mode", {{"enum", {"relative", "absolute"}}, {"default", "relative"}}}},
                {"delta"}),
           tool("tv", json::object(), json::array()),
           tool("l1_target", {{"target", {{"type", "string"}, {"minLength", 1}}}},
                {"target"}),
           tool("magnitude", {{"delta", delta}, {"direction", direction}}, {"delta"}),
           tool("patch_dict",
                {{"source_mask", {{"type", "string"}, {"minLength", 1}}},
                 {"ignore_variance", {{"type", "boolean"}, {"default", false}}}},
                {"source_mask"}),
           tool("periodicity",
                {{"directions",
                  {{"type", "array"}, {"items", vec}, {"minItems", 1}, {"maxItems", 2}}},
                 {"auto", {{"enum", {"x", "y", "xy"}}}}},
                json::array()),
           tool("diversity",
                {{"count", {{"type", "integer"}, {"minimum", 2}, {"default", 2}}},
                 {"proximity", {{"type", "number"}, {"minimum", 0}, {"default", 0}}}},
                json::array()),
           tool("range",
                {{"lo", {{"type", "number"}, {"default", kRangeLow}}},
                 {"hi", {{"type", "number"}, {"default", kRangeHigh}}}},
                json::array()),
           tool("hsv",
                {{"attribute", {{"enum", {"hue", "saturation", "value"}}}},
                 {"amount", {{"type", "number"}}}},
                {"attribute", "amount"}),
           tool("classifier",
                {{"hook", {{"type", "string"}, {"default", "toy"}}},
                 {"class", {{"type", "integer"}, {"minimum", 0}}}},
                {"class"}),
       }}};
  json schema = {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "ejpeg objective"},
      {"$defs", {{"tool", one_tool}}},
      {"oneOf",
       {{{"$ref", "#/$defs/tool"}},
        {{"type", "array"}, {"items", {{"$ref", "#/$defs/tool"}}}, {"minItems", 1}},
        {{"type", "object"},
         {"properties",
          {{"objectives",
            {{"type", "array"}, {"items", {{"$ref", "#/$defs/tool"}}}, {"minItems", 1}}}}},
         {"required", {"objectives"}},
         {"additionalProperties", false}}}}};
  return schema.dump(2);
}

}  // namespace ejpeg
