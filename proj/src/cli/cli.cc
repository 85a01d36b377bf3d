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

#include "ejpeg/cli.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ejpeg/classifier.h"
#include "ejpeg/codec.h"
#include "ejpeg/consistency.h"
#include "ejpeg/consistency_report.h"
#include "ejpeg/error.h"
#include "ejpeg/image_io.h"
#include "ejpeg/jfif.h"
#include "ejpeg/latent_io.h"
#include "ejpeg/optimizer.h"
#include "ejpeg/tool_objective.h"
#include "json.hpp"

namespace ejpeg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// JSON has no infinity; such values are written as strings.
json JsonNum(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

CompressedImage ReadCode(const std::string& path) { return ParseJfif(ReadFileBytes(path)); }

std::string ReadText(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

// Inline JSON, or @path for a file.
std::string ObjectiveText(const std::string& arg) {
  return arg.starts_with("@") ? ReadText(arg.substr(1)) : arg;
}

RegionMask ReadMask(const std::string& path, const CompressedImage& code) {
  if (path.empty()) return RegionMask::Full(code.width, code.height);
  RegionMask mask = MaskFromImage(ReadImageFile(path));
  if (mask.width() != code.width || mask.height() != code.height) {
    Fail(ErrorCode::kDimensionMismatch, "mask " + path + " is " +
                                            std::to_string(mask.width()) + "x" +
                                            std::to_string(mask.height()) + ", image is " +
                                            std::to_string(code.width) + "x" +
                                            std::to_string(code.height));
  }
  return mask;
}

LatentField ReadLatent(const std::string& path, const CompressedImage& code) {
  if (path.empty()) return LatentField::Neutral(code);
  return ParseLatent(ReadFileBytes(path), code);
}

// out.png -> out-2.png
std::string Indexed(const std::string& path, int i) {
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + "-" + std::to_string(i) +
                             p.extension().string()))
      .string();
}

struct Context {
  std::ostream& out;
  bool as_json = false;
  void Emit(const json& j, const std::string& text) const {
    if (as_json) {
      out << j.dump(2) << "\n";
    } else {
      out << text;
    }
  }
};

int Encode(const Context& ctx, const std::string& input, const std::string& output, int qf,
           const std::string& sampling) {
  const CompressedImage code =
      EncodePipeline(ReadImageFile(input), qf, ParseSampling(sampling.c_str()));
  const auto bytes = SerializeJfif(code);
  WriteFileBytes(output, bytes);
  std::ostringstream text;
  text << "wrote " << output << ": " << code.width << "x" << code.height << ", "
       << code.planes.size() << " plane(s), qf " << qf << ", " << SamplingName(code.sampling)
       << ", " << bytes.size() << " bytes\n";
  ctx.Emit({{"output", output},
            {"width", code.width},
            {"height", code.height},
            {"channels", code.planes.size()},
            {"qf", qf},
            {"sampling", SamplingName(code.sampling)},
            {"bytes", bytes.size()}},
           text.str());
  return kExitOk;
}

int Decode(const Context& ctx, const std::string& input, const std::string& output,
           const std::string& mode, const std::string& latent_path, bool real,
           const std::string& reference) {
  const CompressedImage code = ReadCode(input);
  PixelImage image;
  if (mode == "standard") {
    if (!latent_path.empty()) {
      Fail(ErrorCode::kInvalidArgument, "--latent applies to --mode neutral only");
    }
    DecodeOptions options;
    options.integer_samples = !real;
    image = DecodeStandard(code, options);
  } else if (mode == "neutral") {
    image = Reconstruct(code, ReadLatent(latent_path, code)).pixels;
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown decode mode '" + mode + "'");
  }
  WriteImageFile(output, image);
  json j = {{"output", output}, {"mode", mode}, {"width", image.width()},
            {"height", image.height()}, {"channels", image.channels()}};
  std::ostringstream text;
  text << "wrote " << output << " (" << mode << ", " << image.width() << "x" << image.height()
       << ")\n";
  if (!reference.empty()) {
    const double psnr = Psnr(ReadImageFile(reference), image);
    j["psnr_db"] = JsonNum(psnr);
    text << "psnr_db " << Num(psnr) << "\n";
  }
  ctx.Emit(j, text.str());
  return kExitOk;
}

int Verify(const Context& ctx, const std::string& candidate, const std::string& jpeg,
           const std::string& mode, bool latent) {
  const CompressedImage code = ReadCode(jpeg);
  ConsistencyReport report;
  if (latent) {
    if (mode != "dct-exact") {
      Fail(ErrorCode::kInvalidArgument, "latent snapshots verify in dct-exact mode only");
    }
    report = VerifyConsistency(LatentToDct(code, ReadLatent(candidate, code)), code);
  } else if (mode == "dct-exact" || mode == "pixel-rounded") {
    report = VerifyConsistency(ReadImageFile(candidate), code,
                               mode == "dct-exact" ? VerifyMode::kDctExact
                                                   : VerifyMode::kPixelRounded);
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown verify mode '" + mode + "'");
  }
  if (ctx.as_json) {
    ctx.out << ReportToJson(report, 2) << "\n";
  } else {
    ctx.out << ReportToText(report);
  }
  return report.consistent() ? kExitOk : kExitInconsistent;
}

int Project(const Context& ctx, const std::string& desired_path, const std::string& jpeg,
            const std::string& output, const std::string& latent_out) {
  const CompressedImage code = ReadCode(jpeg);
  const PixelImage desired = ReadImageFile(desired_path);
  const ConsistentImage projected = ProjectToConsistent(desired, code);
  WriteImageFile(output, projected.pixels);
  if (!latent_out.empty()) WriteFileBytes(latent_out, SerializeLatent(projected.latent));
  const double rmse = std::sqrt(Mse(desired, projected.pixels));
  const ConsistencyReport report = VerifyConsistency(projected.dct, code);
  std::ostringstream text;
  text << "wrote " << output << "\nrmse_to_desired " << Num(rmse) << "\nresult "
       << (report.consistent() ? "consistent" : "inconsistent") << "\n";
  ctx.Emit({{"output", output},
            {"rmse_to_desired", rmse},
            {"consistent", report.consistent()}},
           text.str());
  return kExitOk;
}

struct OptimizeArgs {
  std::string jpeg, objective, mask, start, output, latent_out, trace;
  int steps = OptimizeConfig{}.steps;
  uint64_t seed = 0;
  double learning_rate = OptimizeConfig{}.learning_rate;
};

ResourceResolver FileResolver() {
  ResourceResolver r;
  r.image = [](const std::string& path) { return ReadImageFile(path); };
  r.mask = [](const std::string& path) { return MaskFromImage(ReadImageFile(path)); };
  return r;
}

int Optimize(const Context& ctx, const OptimizeArgs& a) {
  const CompressedImage code = ReadCode(a.jpeg);
  const std::vector<WeightedTool> tools = ParseObjectives(ObjectiveText(a.objective));
  const RegionMask mask = ReadMask(a.mask, code);
  const LatentField start = ReadLatent(a.start, code);
  OptimizeConfig config;
  config.steps = a.steps;
  config.seed = a.seed;
  config.learning_rate = a.learning_rate;

  const DiversityTool* diversity = nullptr;
  for (const auto& t : tools) {
    if (const auto* d = std::get_if<DiversityTool>(&t.tool)) diversity = d;
  }
  std::vector<LatentField> latents;
  OptimizeTrace trace;
  if (diversity) {
    if (tools.size() != 1) {
      Fail(ErrorCode::kInvalidArgument, "diversity cannot be combined with other tools");
    }
    DiverseResult r = DiverseAlternatives(code, start, mask, diversity->count,
                                          diversity->proximity, config);
    latents = std::move(r.latents);
    trace = r.trace;
  } else {
    OptimizeResult r = ejpeg::Optimize(code, start, tools, mask, config, FileResolver());
    latents.push_back(std::move(r.latent));
    trace = r.trace;
  }

  json outputs = json::array();
  std::ostringstream text;
  bool all_consistent = true;
  for (size_t i = 0; i < latents.size(); ++i) {
    const bool many = latents.size() > 1;
    const ConsistentImage image = Reconstruct(code, latents[i]);
    const bool consistent = VerifyConsistency(image.dct, code).consistent();
    all_consistent = all_consistent && consistent;
    json item = {{"consistent", consistent}};
    if (!a.output.empty()) {
      const std::string path = many ? Indexed(a.output, static_cast<int>(i)) : a.output;
      WriteImageFile(path, image.pixels);
      item["image"] = path;
      text << "wrote " << path << "\n";
    }
    if (!a.latent_out.empty()) {
      const std::string path = many ? Indexed(a.latent_out, static_cast<int>(i)) : a.latent_out;
      WriteFileBytes(path, SerializeLatent(latents[i]));
      item["latent"] = path;
      text << "wrote " << path << "\n";
    }
    outputs.push_back(item);
  }
  if (!a.trace.empty()) {
    const std::string csv = trace.ToCsv();
    WriteFileBytes(a.trace, std::span(reinterpret_cast<const uint8_t*>(csv.data()), csv.size()));
    text << "wrote " << a.trace << "\n";
  }
  const double initial = trace.values.empty() ? trace.final_value : trace.values.front();
  text << "steps " << trace.steps_run << (trace.early_stopped ? " (early stop)" : "")
       << "\ninitial_value " << Num(initial) << "\nfinal_value " << Num(trace.final_value)
       << "\nresult " << (all_consistent ? "consistent" : "inconsistent") << "\n";
  ctx.Emit({{"steps_run", trace.steps_run},
            {"early_stopped", trace.early_stopped},
            {"initial_value", JsonNum(initial)},
            {"final_value", JsonNum(trace.final_value)},
            {"seed", a.seed},
            {"consistent", all_consistent},
            {"outputs", outputs}},
           text.str());
  return kExitOk;
}

int CompareChroma(const Context& ctx, const std::string& input) {
  const PixelImage image = ReadImageFile(input);
  const double psnr = ChromaPipelineCompare(image);
  const double ratio = ChromaEnergyRatio(image);
  ctx.Emit({{"psnr_db", JsonNum(psnr)}, {"energy_ratio", ratio}},
           "psnr_db " + Num(psnr) + "\nenergy_ratio " + Num(ratio) + "\n");
  return kExitOk;
}

int ExploreClassesCommand(const Context& ctx, const std::string& jpeg, const std::string& mask_path,
                          const std::string& hook_id, const std::vector<int>& classes,
                          int steps, uint64_t seed, const std::string& start_path,
                          const std::string& output_dir) {
  const CompressedImage code = ReadCode(jpeg);
  const RegionMask mask = ReadMask(mask_path, code);
  const auto hook = FindClassifier(hook_id);
  OptimizeConfig config;
  config.steps = steps;
  config.seed = seed;
  const auto outcomes = ExploreClasses(code, ReadLatent(start_path, code), mask, hook_id,
                                       classes, config);
  if (!output_dir.empty()) fs::create_directories(output_dir);
  json rows = json::array();
  std::ostringstream text;
  text << "class  score      top1  consistent\n";
  bool all_consistent = true;
  for (const auto& o : outcomes) {
    const int top1 = static_cast<int>(std::max_element(o.scores.begin(), o.scores.end()) -
                                      o.scores.begin());
    const bool consistent =
        VerifyConsistency(LatentToDct(code, o.latent), code).consistent();
    all_consistent = all_consistent && consistent;
    json row = {{"class", o.cls},
                {"score", o.score},
                {"top1", top1},
                {"scores", o.scores},
                {"steps_run", o.trace.steps_run},
                {"consistent", consistent}};
    if (!output_dir.empty()) {
      const std::string stem = (fs::path(output_dir) / ("class-" + std::to_string(o.cls))).string();
      WriteImageFile(stem + ".png", o.output);
      WriteFileBytes(stem + ".f64", SerializeLatent(o.latent));
      row["image"] = stem + ".png";
      row["latent"] = stem + ".f64";
    }
    rows.push_back(row);
    char line[96];
    std::snprintf(line, sizeof(line), "%-6d %-10.6f %-5d %s\n", o.cls, o.score, top1,
                  consistent ? "yes" : "no");
    text << line;
  }
  ctx.Emit({{"hook", hook_id}, {"classes", rows}, {"consistent", all_consistent}}, text.str());
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explorable JPEG decompression tools"};
  app.name("ejpeg");
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable JSON on stdout");
  std::function<int(const Context&)> action;
  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  std::string in, out_path, jpeg, mode, latent, reference, mask, output_dir, sampling = "420";
  int qf = 0;
  bool real = false, is_latent = false;

  CLI::App* encode = sub("encode", "Encode an image to baseline JFIF");
  encode->add_option("input", in, "PNG/PGM/PPM image")->required();
  encode->add_option("output", out_path, "JFIF output")->required();
  encode->add_option("--qf", qf, "Quality factor 1-100")->required()->check(CLI::Range(1, 100));
  encode->add_option("--sampling", sampling, "420 or 444")->check(CLI::IsMember({"420", "444"}));
  encode->callback([&] {
    action = [&](const Context& c) { return Encode(c, in, out_path, qf, sampling); };
  });

  CLI::App* decode = sub("decode", "Decode a JFIF file");
  decode->add_option("input", jpeg, "JFIF file")->required();
  decode->add_option("output", out_path, "Image output (.png/.ppm/.pgm)")->required();
  mode = "standard";
  decode->add_option("--mode", mode, "standard or neutral")
      ->check(CLI::IsMember({"standard", "neutral"}));
  decode->add_option("--latent", latent, "Latent snapshot for --mode neutral");
  decode->add_flag("--real", real, "Real-valued standard decode (no 8-bit stages)");
  decode->add_option("--reference", reference, "Print PSNR against this image");
  decode->callback([&] {
    action = [&](const Context& c) {
      return Decode(c, jpeg, out_path, mode, latent, real, reference);
    };
  });

  std::string verify_mode = "dct-exact";
  CLI::App* verify = sub("verify", "Check an image against a JFIF code");
  verify->add_option("candidate", in, "Candidate image, or latent with --latent")->required();
  verify->add_option("jpeg", jpeg, "JFIF file")->required();
  verify->add_option("--mode", verify_mode, "dct-exact or pixel-rounded")
      ->check(CLI::IsMember({"dct-exact", "pixel-rounded"}));
  verify->add_flag("--latent", is_latent, "Candidate is a latent snapshot");
  verify->callback([&] {
    action = [&](const Context& c) { return Verify(c, in, jpeg, verify_mode, is_latent); };
  });

  std::string latent_out;
  CLI::App* project = sub("project", "Project an image onto the consistent set");
  project->add_option("desired", in, "Desired image")->required();
  project->add_option("jpeg", jpeg, "JFIF file")->required();
  project->add_option("output", out_path, "Projected image output")->required();
  project->add_option("--latent-out", latent_out, "Write the latent snapshot");
  project->callback([&] {
    action = [&](const Context& c) { return Project(c, in, jpeg, out_path, latent_out); };
  });

  OptimizeArgs opt;
  CLI::App* optimize = sub("optimize", "Optimize the latent for weighted objectives");
  optimize->add_option("jpeg", opt.jpeg, "JFIF file")->required();
  optimize->add_option("--objective", opt.objective, "Objective JSON, or @file")->required();
  optimize->add_option("--mask", opt.mask, "Mask image (gray, 255 = weight 1)");
  optimize->add_option("--start", opt.start, "Start from this latent snapshot");
  optimize->add_option("--steps", opt.steps, "Adam steps")->check(CLI::PositiveNumber);
  optimize->add_option("--seed", opt.seed, "Seed");
  optimize->add_option("--lr", opt.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  optimize->add_option("--output", opt.output, "Output image");
  optimize->add_option("--latent-out", opt.latent_out, "Output latent snapshot");
  optimize->add_option("--trace", opt.trace, "Trace CSV");
  optimize->callback([&] { action = [&](const Context& c) { return Optimize(c, opt); }; });

  CLI::App* chroma = sub("compare-chroma", "Compare the 4:2:0 pipeline with the DCT16 model");
  chroma->add_option("image", in, "Color image")->required();
  chroma->callback([&] { action = [&](const Context& c) { return CompareChroma(c, in); }; });

  std::string hook = "toy";
  std::vector<int> classes;
  int class_steps = OptimizeConfig{}.steps;
  uint64_t class_seed = 0;
  CLI::App* explore = sub("explore-classes", "One optimization per classifier class");
  explore->add_option("jpeg", jpeg, "JFIF file")->required();
  explore->add_option("--mask", mask, "Mask image");
  explore->add_option("--hook", hook, "Classifier hook id");
  explore->add_option("--classes", classes, "Classes, comma separated (default all)")
      ->delimiter(',');
  explore->add_option("--steps", class_steps, "Adam steps per class")->check(CLI::PositiveNumber);
  explore->add_option("--seed", class_seed, "Seed");
  explore->add_option("--start", latent, "Start from this latent snapshot");
  explore->add_option("--output-dir", output_dir, "Write class-N.png and class-N.f64 here");
  explore->callback([&] {
    action = [&](const Context& c) {
      return ExploreClassesCommand(c, jpeg, mask, hook, classes, class_steps, class_seed, latent,
                                   output_dir);
    };
  });

  CLI::App* schema = sub("schema", "Print the objective JSON schema");
  schema->callback([&] {
    action = [&](const Context& c) {
      c.out << ObjectiveJsonSchema() << "\n";
      return kExitOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action(Context{out, as_json});
  } catch (const Error& e) {
    err << "ejpeg: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ejpeg: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ejpeg
