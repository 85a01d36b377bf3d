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

#include "ejpeg/service/session_store.h"

#include <cstdio>
#include <random>

#include "ejpeg/error.h"
#include "ejpeg/image_io.h"
#include "ejpeg/jfif.h"
#include "ejpeg/latent_io.h"
#include "json.hpp"

namespace ejpeg::service {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifest = "manifest.json";
constexpr const char* kCodeFile = "code.jpg";
constexpr int kManifestVersion = 1;

LatentField LoadLatent(const fs::path& file, const CompressedImage& code) {
  try {
    return ParseLatent(ReadFileBytes(file.string()), code);
  } catch (const ParseError& e) {
    Fail(ErrorCode::kIo, file.string() + ": " + e.what());
  }
}

PixelImage LoadRawImage(const fs::path& file, int w, int h, int channels) {
  try {
    return ParseRawImage(ReadFileBytes(file.string()), w, h, channels);
  } catch (const ParseError& e) {
    Fail(ErrorCode::kIo, file.string() + ": " + e.what());
  }
}

void WriteAtomically(const fs::path& file, std::span<const uint8_t> bytes) {
  const fs::path tmp = file.string() + ".tmp";
  WriteFileBytes(tmp.string(), bytes);
  fs::rename(tmp, file);
}

json EntryJson(const HistoryEntry& e) {
  json tool;
  try {
    tool = json::parse(e.descriptor);
  } catch (const json::exception&) {
    tool = e.descriptor;
  }
  return {{"latent", e.snapshot}, {"tool", tool}};
}

HistoryEntry EntryFromJson(const json& j, const fs::path& dir,
                           const CompressedImage& code) {
  HistoryEntry e;
  e.snapshot = j.at("latent").get<std::string>();
  e.descriptor = j.at("tool").dump();
  e.latent = LoadLatent(dir / e.snapshot, code);
  return e;
}

}  // namespace

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / kManifest)) continue;
    Session s = Load(entry.path());
    auto slot = std::make_shared<SessionSlot>();
    const std::string id = s.id;
    slot->session = std::move(s);
    sessions_[id] = std::move(slot);
  }
}

std::string SessionStore::NewId() const {
  static std::mutex rng_mu;
  static std::mt19937_64 rng(std::random_device{}());
  std::lock_guard<std::mutex> lock(rng_mu);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

std::shared_ptr<SessionSlot> SessionStore::Add(Session session) {
  auto slot = std::make_shared<SessionSlot>();
  const std::string id = session.id;
  slot->session = std::move(session);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (sessions_.count(id)) Fail(ErrorCode::kConflict, "session id already exists");
    sessions_[id] = slot;
  }
  std::lock_guard<std::mutex> lock(slot->mu);
  Persist(slot->session);
  return slot;
}

std::shared_ptr<SessionSlot> SessionStore::Find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) Fail(ErrorCode::kNotFound, "no session '" + id + "'");
  return it->second;
}

std::vector<std::string> SessionStore::Ids() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, slot] : sessions_) ids.push_back(id);
  return ids;
}

void SessionStore::Remove(const std::string& id) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!sessions_.erase(id)) Fail(ErrorCode::kNotFound, "no session '" + id + "'");
  }
  if (!dir_.empty()) fs::remove_all(dir_ / id);
}

void SessionStore::Persist(Session& s) const {
  if (dir_.empty()) return;
  const fs::path sd = dir_ / s.id;
  fs::create_directories(sd);
  if (!fs::exists(sd / kCodeFile)) WriteAtomically(sd / kCodeFile, SerializeJfif(s.code));

  std::set<std::string> referenced;
  auto save_entry = [&](HistoryEntry& e) {
    if (e.snapshot.empty()) {
      e.snapshot = "latent-" + std::to_string(s.next_snapshot++) + ".f64";
      WriteAtomically(sd / e.snapshot, SerializeLatent(e.latent));
    }
    referenced.insert(e.snapshot);
  };
  for (auto& e : s.history) save_entry(e);
  for (auto& e : s.redo) save_entry(e);

  json manifest = {{"format", "ejpeg-session"},
                   {"version", kManifestVersion},
                   {"id", s.id},
                   {"created_ms", s.created_ms},
                   {"modified_ms", s.modified_ms},
                   {"code", kCodeFile},
                   {"width", s.code.width},
                   {"height", s.code.height},
                   {"channels", s.code.planes.size()},
                   {"sampling", SamplingName(s.code.sampling)},
                   {"next_snapshot", s.next_snapshot}};
  json history = json::array(), redo = json::array();
  for (const auto& e : s.history) history.push_back(EntryJson(e));
  for (const auto& e : s.redo) redo.push_back(EntryJson(e));
  manifest["history"] = history;
  manifest["redo"] = redo;

  json masks = json::object();
  for (const auto& [name, mask] : s.masks) {
    const std::string file = "mask-" + name + ".png";
    if (s.unsaved.count("mask:" + name) || !fs::exists(sd / file)) {
      WriteAtomically(sd / file, EncodePng(MaskToImage(mask)));
    }
    masks[name] = file;
    referenced.insert(file);
  }
  json images = json::object();
  for (const auto& [name, image] : s.images) {
    const std::string file = "image-" + name + ".f64";
    if (s.unsaved.count("image:" + name) || !fs::exists(sd / file)) {
      WriteAtomically(sd / file, SerializeRawImage(image));
    }
    images[name] = {{"file", file},
                    {"width", image.width()},
                    {"height", image.height()},
                    {"channels", image.channels()}};
    referenced.insert(file);
  }
  manifest["masks"] = masks;
  manifest["images"] = images;
  const std::string text = manifest.dump(2);
  WriteAtomically(sd / kManifest, std::span(reinterpret_cast<const uint8_t*>(text.data()),
                                            text.size()));
  s.unsaved.clear();

  // Snapshots dropped by a new edit after undo, and replaced resources.
  for (const auto& entry : fs::directory_iterator(sd)) {
    const std::string name = entry.path().filename().string();
    const bool managed = name.starts_with("latent-") || name.starts_with("mask-") ||
                         name.starts_with("image-");
    if (managed && !referenced.count(name)) fs::remove(entry.path());
  }
}

Session SessionStore::Load(const fs::path& sd) {
  const auto text = ReadFileBytes((sd / kManifest).string());
  json m;
  try {
    m = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    Fail(ErrorCode::kIo, (sd / kManifest).string() + ": " + e.what());
  }
  try {
    if (m.at("format") != "ejpeg-session" || m.at("version") != kManifestVersion) {
      Fail(ErrorCode::kIo, (sd / kManifest).string() + ": unknown manifest format");
    }
    Session s;
    s.id = m.at("id").get<std::string>();
    s.created_ms = m.at("created_ms").get<int64_t>();
    s.modified_ms = m.at("modified_ms").get<int64_t>();
    s.next_snapshot = m.at("next_snapshot").get<int>();
    s.code = ParseJfif(ReadFileBytes((sd / m.at("code").get<std::string>()).string()));
    for (const auto& e : m.at("history")) s.history.push_back(EntryFromJson(e, sd, s.code));
    for (const auto& e : m.at("redo")) s.redo.push_back(EntryFromJson(e, sd, s.code));
    if (s.history.empty()) Fail(ErrorCode::kIo, "manifest has an empty history");
    for (const auto& [name, file] : m.at("masks").items()) {
      s.masks[name] = MaskFromImage(
          DecodeImage(ReadFileBytes((sd / file.get<std::string>()).string())));
    }
    for (const auto& [name, info] : m.at("images").items()) {
      s.images[name] = LoadRawImage(sd / info.at("file").get<std::string>(),
                                       info.at("width").get<int>(),
                                       info.at("height").get<int>(),
                                       info.at("channels").get<int>());
    }
    return s;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kIo, (sd / kManifest).string() + ": " + e.what());
  }
}

}  // namespace ejpeg::service
