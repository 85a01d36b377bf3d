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

#include "ejpeg/service/server.h"

#include <cmath>
#include <optional>

#include "ejpeg/classifier.h"
#include "ejpeg/consistency.h"
#include "ejpeg/consistency_report.h"
#include "ejpeg/image_io.h"
#include "ejpeg/imprint.h"
#include "ejpeg/jfif.h"
#include "ejpeg/objectives.h"
#include "ejpeg/resample.h"
#include "ejpeg/tool_objective.h"
#include "httplib.h"
#include "json.hpp"

namespace ejpeg::service {
namespace {

using httplib::Request;
using httplib::Response;
using nlohmann::json;

// Job previews larger than this are downscaled for display.
constexpr double kPreviewMaxPixels = 1e6;

const char* ErrorCodeSlug(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorCode::kUnsupportedFormat:
      return "unsupported_format";
    case ErrorCode::kParseError:
      return "parse_error";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kIo:
      return "io";
  }
  return "internal";
}

void SendJson(Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(Response& res, int status, const std::string& code,
               const std::string& message, const std::string* path = nullptr) {
  json body = {{"error", message}, {"code", code}};
  if (path) body["path"] = *path;
  SendJson(res, status, body);
}

// Re-roots a schema error found inside a request member.
SchemaError Reroot(const SchemaError& e, const std::string& prefix) {
  const std::string head =
      "objective schema error at " + (e.path().empty() ? "/" : e.path()) + ": ";
  std::string message = e.what();
  if (message.starts_with(head)) message = message.substr(head.size());
  return SchemaError(prefix + e.path(), message);
}

using Handler = std::function<void(const Request&, Response&)>;

Handler Guarded(Handler fn) {
  return [fn = std::move(fn)](const Request& req, Response& res) {
    try {
      fn(req, res);
    } catch (const SchemaError& e) {
      const std::string path = e.path().empty() ? "/" : e.path();
      SendError(res, 400, "schema", e.what(), &path);
    } catch (const Error& e) {
      SendError(res, HttpStatus(e.code()), ErrorCodeSlug(e.code()), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    }
  };
}

std::span<const uint8_t> BodyBytes(const Request& req) {
  return {reinterpret_cast<const uint8_t*>(req.body.data()), req.body.size()};
}

bool LooksLikeJson(const Request& req) {
  const size_t first = req.body.find_first_not_of(" \t\r\n");
  return first != std::string::npos && req.body[first] == '{';
}

json ParseBody(const Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw SchemaError("", "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("request body is not JSON: ") + e.what());
  }
}

void RejectUnknown(const json& j, const std::string& path,
                   std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw SchemaError(path + "/" + key, "unknown field");
  }
}

const json* Member(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double GetNumber(const json& j, const char* key, const std::string& path, double fallback) {
  const json* v = Member(j, key);
  if (!v) return fallback;
  if (!v->is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return v->get<double>();
}

int64_t GetInt(const json& j, const char* key, const std::string& path, int64_t fallback) {
  const json* v = Member(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw SchemaError(path + "/" + key, "expected an integer");
  return v->get<int64_t>();
}

std::string GetString(const json& j, const char* key, const std::string& path,
                      const std::string& fallback) {
  const json* v = Member(j, key);
  if (!v) return fallback;
  if (!v->is_string()) throw SchemaError(path + "/" + key, "expected a string");
  return v->get<std::string>();
}

bool GetBool(const json& j, const char* key, const std::string& path, bool fallback) {
  const json* v = Member(j, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw SchemaError(path + "/" + key, "expected a boolean");
  return v->get<bool>();
}

const json& GetObject(const json& j, const char* key, const std::string& path) {
  const json* v = Member(j, key);
  if (!v) throw SchemaError(path + "/" + key, "required field missing");
  if (!v->is_object()) throw SchemaError(path + "/" + key, "expected an object");
  return *v;
}

Rect ParseRect(const json& j, const std::string& path, bool need_size) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  RejectUnknown(j, path, {"x", "y", "width", "height"});
  Rect r;
  r.x = static_cast<int>(GetInt(j, "x", path, 0));
  r.y = static_cast<int>(GetInt(j, "y", path, 0));
  if (need_size) {
    if (!Member(j, "width") || !Member(j, "height")) {
      throw SchemaError(path, "width and height are required");
    }
    r.width = static_cast<int>(GetInt(j, "width", path, 0));
    r.height = static_cast<int>(GetInt(j, "height", path, 0));
  }
  return r;
}

std::optional<int> QueryInt(const Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const std::string text = req.get_param_value(key);
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kInvalidArgument, std::string("query parameter ") + key +
                                        " must be an integer, got '" + text + "'");
}

json DescriptorJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

json SessionJson(const SessionSlot& slot) {
  const Session& s = slot.session;
  json history = json::array(), masks = json::array(), images = json::array();
  for (const auto& e : s.history) history.push_back(DescriptorJson(e.descriptor));
  for (const auto& [name, m] : s.masks) masks.push_back(name);
  for (const auto& [name, m] : s.images) images.push_back(name);
  return {{"id", s.id},
          {"width", s.code.width},
          {"height", s.code.height},
          {"channels", s.code.planes.size()},
          {"color", s.code.is_color()},
          {"sampling", SamplingName(s.code.sampling)},
          {"created_ms", s.created_ms},
          {"modified_ms", s.modified_ms},
          {"history", history},
          {"history_depth", s.history.size()},
          {"redo_depth", s.redo.size()},
          {"can_undo", s.history.size() > 1},
          {"can_redo", !s.redo.empty()},
          {"masks", masks},
          {"images", images},
          {"active_job", slot.active_job.empty() ? json(nullptr) : json(slot.active_job)}};
}

json JobJson(const Job& job, size_t since) {
  std::lock_guard<std::mutex> lock(job.mu);
  json results = json::array();
  for (size_t i = 0; i < job.results.size(); ++i) {
    const JobResult& r = job.results[i];
    json item = {{"index", i}, {"label", r.label}, {"score", r.score}};
    item["class"] = r.cls >= 0 ? json(r.cls) : json(nullptr);
    results.push_back(item);
  }
  since = std::min(since, job.values.size());
  json out = {{"id", job.id},
              {"session", job.session_id},
              {"kind", JobKindName(job.kind)},
              {"status", JobStatusName(job.status)},
              {"step", job.step},
              {"total_steps", job.total_steps},
              {"trace_offset", since},
              {"trace", std::vector<double>(job.values.begin() + since, job.values.end())},
              {"preview_available", !job.preview.planes.empty() || !job.results.empty()},
              {"committed", job.committed},
              {"results", results}};
  if (job.terminal() && job.status != JobStatus::kFailed) {
    out["final_value"] = std::isfinite(job.final_value) ? json(job.final_value) : json(nullptr);
    out["early_stopped"] = job.early_stopped;
  }
  if (job.status == JobStatus::kFailed) {
    out["error"] = job.error;
    out["error_code"] = ErrorCodeSlug(job.error_code);
  }
  return out;
}

// Code and current latent copied out under the slot lock.
struct Committed {
  CompressedImage code;
  LatentField latent;
};

Committed Snapshot(SessionSlot& slot) {
  std::lock_guard<std::mutex> lock(slot.mu);
  return {slot.session.code, slot.session.latent()};
}

void RequireIdle(const SessionSlot& slot) {
  if (!slot.active_job.empty()) {
    Fail(ErrorCode::kConflict, "session " + slot.session.id + " is busy with job " +
                                   slot.active_job);
  }
}

std::string CompactReport(const DctImage& dct, const CompressedImage& code) {
  return ReportToJson(VerifyConsistency(dct, code));
}

void SendImage(Response& res, const PixelImage& image, const std::string& format) {
  if (format == "png") {
    const auto bytes = EncodePng(image);
    res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
  } else if (format == "ppm" || format == "pnm") {
    const auto bytes = EncodePnm(image);
    res.set_content(std::string(bytes.begin(), bytes.end()),
                    image.channels() == 1 ? "image/x-portable-graymap"
                                          : "image/x-portable-pixmap");
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown image format '" + format + "'");
  }
}

void SendConsistentImage(Response& res, const ConsistentImage& image,
                         const CompressedImage& code, const std::string& format) {
  res.set_header("X-Consistency-Report", CompactReport(image.dct, code));
  SendImage(res, image.pixels, format);
}

std::string FormatParam(const Request& req, const std::string& fallback) {
  return req.has_param("format") ? req.get_param_value("format") : fallback;
}

RegionMask MaskFromJson(const json& body, int width, int height) {
  const double weight = GetNumber(body, "weight", "", 1.0);
  if (!(weight > 0.0 && weight <= 1.0)) throw SchemaError("/weight", "must be in (0, 1]");
  std::vector<Rect> rects;
  if (const json* r = Member(body, "rect")) rects.push_back(ParseRect(*r, "/rect", true));
  if (const json* list = Member(body, "rects")) {
    if (!list->is_array()) throw SchemaError("/rects", "expected an array");
    for (size_t i = 0; i < list->size(); ++i) {
      rects.push_back(ParseRect((*list)[i], "/rects/" + std::to_string(i), true));
    }
  }
  const bool full = GetBool(body, "full", "", false);
  if (rects.empty() && !full) throw SchemaError("", "expected rect, rects or full");
  RegionMask mask(width, height, full ? weight : 0.0);
  for (const Rect& r : rects) {
    for (int y = std::max(r.y, 0); y < std::min(r.y + r.height, height); ++y) {
      for (int x = std::max(r.x, 0); x < std::min(r.x + r.width, width); ++x) {
        mask.at(x, y) = weight;
      }
    }
  }
  return mask;
}

OptimizeConfig ConfigFromJson(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  RejectUnknown(j, path,
                {"steps", "learning_rate", "beta1", "beta2", "epsilon", "seed",
                 "early_stop_tolerance", "early_stop_window"});
  OptimizeConfig c;
  c.steps = static_cast<int>(GetInt(j, "steps", path, c.steps));
  c.learning_rate = GetNumber(j, "learning_rate", path, c.learning_rate);
  c.beta1 = GetNumber(j, "beta1", path, c.beta1);
  c.beta2 = GetNumber(j, "beta2", path, c.beta2);
  c.epsilon = GetNumber(j, "epsilon", path, c.epsilon);
  if (const json* seed = Member(j, "seed")) {
    if (!seed->is_number_integer() || (seed->is_number_integer() && !seed->is_number_unsigned() &&
                                       seed->get<int64_t>() < 0)) {
      throw SchemaError(path + "/seed", "expected a non-negative integer");
    }
    c.seed = seed->get<uint64_t>();
  }
  c.early_stop_tolerance = GetNumber(j, "early_stop_tolerance", path, c.early_stop_tolerance);
  c.early_stop_window =
      static_cast<int>(GetInt(j, "early_stop_window", path, c.early_stop_window));
  try {
    c.Validate();
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  return c;
}

JobRequest JobRequestFromJson(const json& body) {
  RejectUnknown(body, "",
                {"kind", "objective", "mask", "config", "hook", "classes", "count",
                 "proximity"});
  JobRequest r;
  const std::string kind = GetString(body, "kind", "", "optimize");
  r.mask = GetString(body, "mask", "", "");
  if (const json* c = Member(body, "config")) r.config = ConfigFromJson(*c, "/config");
  json descriptor = {{"mask", r.mask.empty() ? json(nullptr) : json(r.mask)},
                     {"seed", r.config.seed},
                     {"steps", r.config.steps}};
  if (kind == "optimize" || kind == "diverse") {
    const json* objective = Member(body, "objective");
    if (objective) {
      try {
        r.tools = ParseObjectives(objective->dump());
      } catch (const SchemaError& e) {
        throw Reroot(e, "/objective");
      }
    } else if (kind == "optimize") {
      throw SchemaError("/objective", "required field missing");
    }
    const DiversityTool* diversity = nullptr;
    for (const auto& t : r.tools) {
      if (const auto* d = std::get_if<DiversityTool>(&t.tool)) diversity = d;
    }
    if (diversity || kind == "diverse") {
      if (diversity && r.tools.size() != 1) {
        throw SchemaError("/objective", "diversity cannot be combined with other tools");
      }
      if (!diversity && !r.tools.empty()) {
        throw SchemaError("/objective", "diverse jobs take only a diversity objective");
      }
      r.kind = JobKind::kDiverse;
      r.count = diversity ? diversity->count : 2;
      r.proximity = diversity ? diversity->proximity : 0.0;
      r.count = static_cast<int>(GetInt(body, "count", "", r.count));
      r.proximity = GetNumber(body, "proximity", "", r.proximity);
      descriptor["tool"] = "diverse";
      descriptor["count"] = r.count;
      descriptor["proximity"] = r.proximity;
    } else {
      r.kind = JobKind::kOptimize;
      descriptor["tool"] = "optimize";
      descriptor["objectives"] = json::parse(ObjectivesToJson(r.tools))["objectives"];
    }
  } else if (kind == "explore_classes") {
    r.kind = JobKind::kExploreClasses;
    r.hook = GetString(body, "hook", "", r.hook);
    if (const json* classes = Member(body, "classes")) {
      if (!classes->is_array()) throw SchemaError("/classes", "expected an array");
      for (size_t i = 0; i < classes->size(); ++i) {
        if (!(*classes)[i].is_number_integer()) {
          throw SchemaError("/classes/" + std::to_string(i), "expected an integer");
        }
        r.classes.push_back((*classes)[i].get<int>());
      }
    }
    descriptor["tool"] = "explore_classes";
    descriptor["hook"] = r.hook;
  } else {
    throw SchemaError("/kind", "expected optimize, explore_classes or diverse");
  }
  r.descriptor = descriptor.dump();
  return r;
}

}  // namespace

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kParseError:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kUnsupportedFormat:
      return 415;
    case ErrorCode::kNumerical:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

Server::Server(const ServerConfig& config)
    : config_(config),
      store_(std::make_unique<SessionStore>(config.data_dir)),
      jobs_(std::make_unique<JobRunner>(*store_, config.job_threads)),
      http_(std::make_unique<httplib::Server>()) {
  Routes();
}

Server::~Server() {
  Stop();
  jobs_.reset();
}

int Server::Bind() {
  int port = config_.port;
  if (port == 0) {
    port = http_->bind_to_any_port(config_.host);
  } else if (!http_->bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    Fail(ErrorCode::kIo, "cannot listen on " + config_.host + ":" +
                             std::to_string(config_.port));
  }
  return port;
}

void Server::Serve() { http_->listen_after_bind(); }

void Server::Stop() {
  if (http_->is_running()) http_->stop();
}

void Server::Routes() {
  httplib::Server& h = *http_;
  SessionStore& store = *store_;
  JobRunner& jobs = *jobs_;

  h.Get("/health", Guarded([](const Request&, Response& res) {
          SendJson(res, 200, {{"status", "ok"}});
        }));

  h.Get("/schema/objective", Guarded([](const Request&, Response& res) {
          res.set_content(ObjectiveJsonSchema(), "application/schema+json");
        }));

  h.Get("/classifiers", Guarded([](const Request&, Response& res) {
          json list = json::array();
          for (const auto& id : ClassifierIds()) {
            list.push_back({{"id", id}, {"classes", FindClassifier(id)->class_count()}});
          }
          SendJson(res, 200, {{"classifiers", list}});
        }));

  h.Post("/sessions", Guarded([&store](const Request& req, Response& res) {
           const int qf = QueryInt(req, "qf").value_or(0);
           const std::string sampling =
               req.has_param("sampling") ? req.get_param_value("sampling") : "420";
           Session s = NewSession(store.NewId(), BodyBytes(req), qf,
                                  ParseSampling(sampling.c_str()));
           auto slot = store.Add(std::move(s));
           std::lock_guard<std::mutex> lock(slot->mu);
           SendJson(res, 201, SessionJson(*slot));
         }));

  h.Get("/sessions", Guarded([&store](const Request&, Response& res) {
          json list = json::array();
          for (const auto& id : store.Ids()) {
            try {
              auto slot = store.Find(id);
              std::lock_guard<std::mutex> lock(slot->mu);
              list.push_back(SessionJson(*slot));
            } catch (const Error&) {
              // Deleted while listing.
            }
          }
          SendJson(res, 200, {{"sessions", list}});
        }));

  h.Get(R"(/sessions/([^/]+))", Guarded([&store](const Request& req, Response& res) {
          auto slot = store.Find(req.matches[1]);
          std::lock_guard<std::mutex> lock(slot->mu);
          SendJson(res, 200, SessionJson(*slot));
        }));

  h.Delete(R"(/sessions/([^/]+))", Guarded([&store](const Request& req, Response& res) {
             auto slot = store.Find(req.matches[1]);
             {
               std::lock_guard<std::mutex> lock(slot->mu);
               RequireIdle(*slot);
             }
             store.Remove(req.matches[1]);
             SendJson(res, 200, {{"deleted", std::string(req.matches[1])}});
           }));

  h.Post(R"(/sessions/([^/]+)/masks)", Guarded([&store](const Request& req, Response& res) {
           auto slot = store.Find(req.matches[1]);
           std::string name = req.has_param("name") ? req.get_param_value("name") : "";
           std::lock_guard<std::mutex> lock(slot->mu);
           Session& s = slot->session;
           RegionMask mask;
           if (LooksLikeJson(req)) {
             const json body = ParseBody(req);
             RejectUnknown(body, "", {"name", "rect", "rects", "full", "weight"});
             name = GetString(body, "name", "", name);
             mask = MaskFromJson(body, s.code.width, s.code.height);
           } else {
             mask = MaskFromImage(DecodeImage(BodyBytes(req)));
           }
           if (name.empty()) name = "mask";
           s.PutMask(name, std::move(mask));
           store.Persist(s);
           const RegionMask& stored = s.Mask(name);
           const Rect support = stored.Support();
           SendJson(res, 201,
                    {{"name", name},
                     {"support",
                      {{"x", support.x}, {"y", support.y}, {"width", support.width},
                       {"height", support.height}}},
                     {"empty", !stored.AnyPositive()}});
         }));

  h.Get(R"(/sessions/([^/]+)/masks/([^/]+))",
        Guarded([&store](const Request& req, Response& res) {
          auto slot = store.Find(req.matches[1]);
          PixelImage image;
          {
            std::lock_guard<std::mutex> lock(slot->mu);
            image = MaskToImage(slot->session.Mask(req.matches[2]));
          }
          SendImage(res, image, "png");
        }));

  h.Post(R"(/sessions/([^/]+)/images)", Guarded([&store](const Request& req, Response& res) {
           auto slot = store.Find(req.matches[1]);
           std::string name = req.has_param("name") ? req.get_param_value("name") : "";
           std::lock_guard<std::mutex> lock(slot->mu);
           Session& s = slot->session;
           PixelImage image;
           if (LooksLikeJson(req)) {
             const json body = ParseBody(req);
             RejectUnknown(body, "", {"name", "crop"});
             name = GetString(body, "name", "", name);
             const Rect r = ParseRect(GetObject(body, "crop", ""), "/crop", true);
             if (r.empty() || r.x < 0 || r.y < 0 || r.x + r.width > s.code.width ||
                 r.y + r.height > s.code.height) {
               throw SchemaError("/crop", "crop must be non-empty and inside the image");
             }
             image = s.Current().pixels.Cropped(r.x, r.y, r.width, r.height);
           } else {
             image = DecodeImage(BodyBytes(req));
           }
           if (name.empty()) name = "image";
           const int w = image.width(), hgt = image.height(), c = image.channels();
           s.PutImage(name, std::move(image));
           store.Persist(s);
           SendJson(res, 201, {{"name", name}, {"width", w}, {"height", hgt}, {"channels", c}});
         }));

  h.Get(R"(/sessions/([^/]+)/images/([^/]+))",
        Guarded([&store](const Request& req, Response& res) {
          auto slot = store.Find(req.matches[1]);
          PixelImage image;
          {
            std::lock_guard<std::mutex> lock(slot->mu);
            image = slot->session.Image(req.matches[2]);
          }
          SendImage(res, image, FormatParam(req, "png"));
        }));

  h.Post(R"(/sessions/([^/]+)/jobs)", Guarded([&jobs](const Request& req, Response& res) {
           const std::string session_id = req.matches[1];
           JobRequest request = JobRequestFromJson(ParseBody(req));
           auto job = jobs.Submit(session_id, std::move(request));
           res.set_header("Location", "/jobs/" + job->id);
           SendJson(res, 202, JobJson(*job, 0));
         }));

  h.Get(R"(/jobs/([^/]+))", Guarded([&jobs](const Request& req, Response& res) {
          const size_t since = static_cast<size_t>(std::max(0, QueryInt(req, "since").value_or(0)));
          SendJson(res, 200, JobJson(*jobs.Find(req.matches[1]), since));
        }));

  h.Post(R"(/jobs/([^/]+)/cancel)", Guarded([&jobs](const Request& req, Response& res) {
           const bool requested = jobs.Cancel(req.matches[1]);
           json body = JobJson(*jobs.Find(req.matches[1]), 0);
           body["cancel_requested"] = requested;
           SendJson(res, 200, body);
         }));

  h.Get(R"(/jobs/([^/]+)/preview)", Guarded([&jobs, &store](const Request& req,
                                                            Response& res) {
          auto job = jobs.Find(req.matches[1]);
          const Committed base = Snapshot(*store.Find(job->session_id));
          LatentField latent;
          {
            std::lock_guard<std::mutex> lock(job->mu);
            if (const auto index = QueryInt(req, "result")) {
              if (*index < 0 || *index >= static_cast<int>(job->results.size())) {
                Fail(ErrorCode::kNotFound, "job has no result " + std::to_string(*index));
              }
              latent = job->results[*index].latent;
            } else if (job->status == JobStatus::kDone && !job->results.empty()) {
              latent = job->results.front().latent;
            } else if (!job->preview.planes.empty()) {
              latent = job->preview;
            } else {
              latent = base.latent;
            }
            res.set_header("X-Job-Step", std::to_string(job->step));
          }
          ConsistentImage image = Reconstruct(base.code, latent);
          res.set_header("X-Consistency-Report", CompactReport(image.dct, base.code));
          const double pixels = static_cast<double>(image.pixels.width()) * image.pixels.height();
          if (pixels > kPreviewMaxPixels && !req.has_param("full")) {
            const double scale = std::sqrt(kPreviewMaxPixels / pixels);
            const int w = std::max(1, static_cast<int>(image.pixels.width() * scale));
            const int hgt = std::max(1, static_cast<int>(image.pixels.height() * scale));
            res.set_header("X-Preview-Scale", std::to_string(scale));
            const PixelImage clamped = image.pixels.Clamped();
            std::vector<Plane> planes;
            for (int c = 0; c < clamped.channels(); ++c) {
              planes.push_back(ResizeBilinear(clamped.plane(c), w, hgt));
            }
            SendImage(res, PixelImage(std::move(planes)), FormatParam(req, "png"));
          } else {
            SendImage(res, image.pixels, FormatParam(req, "png"));
          }
        }));

  h.Post(R"(/sessions/([^/]+)/adopt)", Guarded([&jobs, &store](const Request& req,
                                                              Response& res) {
           const std::string session_id = req.matches[1];
           const json body = ParseBody(req);
           RejectUnknown(body, "", {"job", "index"});
           const std::string job_id = GetString(body, "job", "", "");
           if (job_id.empty()) throw SchemaError("/job", "required field missing");
           const int64_t index = GetInt(body, "index", "", 0);
           auto job = jobs.Find(job_id);
           if (job->session_id != session_id) {
             Fail(ErrorCode::kNotFound, "job " + job_id + " belongs to another session");
           }
           JobResult result;
           {
             std::lock_guard<std::mutex> lock(job->mu);
             if (job->status != JobStatus::kDone) {
               Fail(ErrorCode::kConflict, "job " + job_id + " is " +
                                              JobStatusName(job->status));
             }
             if (index < 0 || index >= static_cast<int64_t>(job->results.size())) {
               throw SchemaError("/index", "no such result");
             }
             result = job->results[index];
           }
           auto slot = store.Find(session_id);
           std::lock_guard<std::mutex> lock(slot->mu);
           RequireIdle(*slot);
           json descriptor = {{"tool", "adopt"},
                              {"job", job_id},
                              {"index", index},
                              {"label", result.label}};
           slot->session.Push(std::move(result.latent), descriptor.dump());
           store.Persist(slot->session);
           SendJson(res, 200, SessionJson(*slot));
         }));

  const auto history_op = [&store](bool undo) {
    return Guarded([&store, undo](const Request& req, Response& res) {
      auto slot = store.Find(req.matches[1]);
      std::lock_guard<std::mutex> lock(slot->mu);
      RequireIdle(*slot);
      const bool changed = undo ? slot->session.Undo() : slot->session.Redo();
      if (changed) store.Persist(slot->session);
      json body = SessionJson(*slot);
      body["changed"] = changed;
      SendJson(res, 200, body);
    });
  };
  h.Post(R"(/sessions/([^/]+)/undo)", history_op(true));
  h.Post(R"(/sessions/([^/]+)/redo)", history_op(false));

  h.Get(R"(/sessions/([^/]+)/export)", Guarded([&store](const Request& req, Response& res) {
          const Committed c = Snapshot(*store.Find(req.matches[1]));
          const std::string format = FormatParam(req, "jfif");
          const ConsistentImage current = Reconstruct(c.code, c.latent);
          if (format == "jfif" || format == "jpg" || format == "jpeg") {
            res.set_header("X-Consistency-Report", CompactReport(current.dct, c.code));
            const auto bytes = SerializeJfif(c.code);
            res.set_content(std::string(bytes.begin(), bytes.end()), "image/jpeg");
          } else {
            SendConsistentImage(res, current, c.code, format);
          }
        }));

  h.Get(R"(/sessions/([^/]+)/verify)", Guarded([&store](const Request& req, Response& res) {
          const Committed c = Snapshot(*store.Find(req.matches[1]));
          const std::string mode =
              req.has_param("mode") ? req.get_param_value("mode") : "dct-exact";
          const ConsistentImage current = Reconstruct(c.code, c.latent);
          ConsistencyReport report;
          if (mode == "dct-exact") {
            report = VerifyConsistency(current.dct, c.code);
          } else if (mode == "pixel-rounded") {
            report = VerifyConsistency(current.pixels, c.code, VerifyMode::kPixelRounded);
          } else {
            Fail(ErrorCode::kInvalidArgument, "unknown verify mode '" + mode + "'");
          }
          res.set_content(ReportToJson(report), "application/json");
        }));

  h.Post(R"(/sessions/([^/]+)/hsv)", Guarded([&store](const Request& req, Response& res) {
           const json body = ParseBody(req);
           RejectUnknown(body, "", {"attribute", "amount", "mask", "commit"});
           HsvAttribute attribute;
           try {
             attribute = ParseHsvAttribute(GetString(body, "attribute", "", ""));
           } catch (const Error& e) {
             throw SchemaError("/attribute", e.what());
           }
           const double amount = GetNumber(body, "amount", "", 0.0);
           const std::string mask_name = GetString(body, "mask", "", "");
           const bool commit = GetBool(body, "commit", "", false);
           auto slot = store.Find(req.matches[1]);
           std::lock_guard<std::mutex> lock(slot->mu);
           Session& s = slot->session;
           if (commit) RequireIdle(*slot);
           const RegionMask mask = mask_name.empty()
                                       ? RegionMask::Full(s.code.width, s.code.height)
                                       : s.Mask(mask_name);
           const PixelImage target =
               BuildHsvTarget(s.Current().pixels, mask, attribute, amount);
           ConsistentImage projected = ProjectToConsistent(target, s.code);
           if (commit) {
             json descriptor = {{"tool", "hsv"},
                                {"attribute", HsvAttributeName(attribute)},
                                {"amount", amount},
                                {"mask", mask_name.empty() ? json(nullptr) : json(mask_name)}};
             s.Push(std::move(projected.latent), descriptor.dump());
             store.Persist(s);
             SendJson(res, 200, SessionJson(*slot));
           } else {
             SendConsistentImage(res, projected, s.code, FormatParam(req, "png"));
           }
         }));

  h.Post(R"(/sessions/([^/]+)/imprint)", Guarded([&store](const Request& req,
                                                          Response& res) {
           const json body = ParseBody(req);
           RejectUnknown(body, "", {"content", "target", "transform", "commit"});
           const std::string content = GetString(body, "content", "", "");
           if (content.empty()) throw SchemaError("/content", "required field missing");
           const Rect at = ParseRect(GetObject(body, "target", ""), "/target", false);
           ImprintTransform transform;
           if (const json* t = Member(body, "transform")) {
             if (!t->is_object()) throw SchemaError("/transform", "expected an object");
             RejectUnknown(*t, "/transform", {"dx", "dy", "scale", "rotation_degrees"});
             transform.dx = static_cast<int>(GetInt(*t, "dx", "/transform", 0));
             transform.dy = static_cast<int>(GetInt(*t, "dy", "/transform", 0));
             transform.scale = GetNumber(*t, "scale", "/transform", 1.0);
             transform.rotation_degrees =
                 GetNumber(*t, "rotation_degrees", "/transform", 0.0);
           }
           const bool commit = GetBool(body, "commit", "", false);
           auto slot = store.Find(req.matches[1]);
           std::lock_guard<std::mutex> lock(slot->mu);
           Session& s = slot->session;
           if (commit) RequireIdle(*slot);
           ImprintSpec spec;
           spec.content = s.Image(content);
           spec.target = {at.x, at.y, spec.content.width(), spec.content.height()};
           spec.transform = transform;
           ImprintPreview preview = ApplyImprint(s.Current().pixels, s.code, spec);
           if (commit) {
             json descriptor = {{"tool", "imprint"},
                                {"content", content},
                                {"x", at.x},
                                {"y", at.y},
                                {"dx", transform.dx},
                                {"dy", transform.dy},
                                {"scale", transform.scale},
                                {"rotation_degrees", transform.rotation_degrees}};
             s.Push(std::move(preview.projected.latent), descriptor.dump());
             store.Persist(s);
             json out = SessionJson(*slot);
             out["residual"] = preview.residual;
             SendJson(res, 200, out);
           } else {
             res.set_header("X-Imprint-Residual", std::to_string(preview.residual));
             SendConsistentImage(res, preview.projected, s.code, FormatParam(req, "png"));
           }
         }));

  h.Post(R"(/sessions/([^/]+)/shift-search)", Guarded([&store](const Request& req,
                                                               Response& res) {
           const json body = ParseBody(req);
           RejectUnknown(body, "", {"content", "target"});
           const std::string content = GetString(body, "content", "", "");
           if (content.empty()) throw SchemaError("/content", "required field missing");
           const Rect at = ParseRect(GetObject(body, "target", ""), "/target", false);
           auto slot = store.Find(req.matches[1]);
           PixelImage base, image;
           CompressedImage code;
           {
             std::lock_guard<std::mutex> lock(slot->mu);
             base = slot->session.Current().pixels;
             image = slot->session.Image(content);
             code = slot->session.code;
           }
           const ShiftSearchResult r = ImprintShiftSearch(
               base, image, code, {at.x, at.y, image.width(), image.height()});
           SendJson(res, 200,
                    {{"dx", r.dx},
                     {"dy", r.dy},
                     {"residual", r.residual},
                     {"residuals", std::vector<double>(r.residuals.begin(), r.residuals.end())}});
         }));
}

}  // namespace ejpeg::service
