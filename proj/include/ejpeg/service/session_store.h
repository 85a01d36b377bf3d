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

#ifndef EJPEG_SERVICE_SESSION_STORE_H_
#define EJPEG_SERVICE_SESSION_STORE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ejpeg/service/session.h"

namespace ejpeg::service {

// A session plus its writer lock. active_job is non-empty while a job owns
// the session's latent.
struct SessionSlot {
  std::mutex mu;
  Session session;
  std::string active_job;
};

// Sessions kept in memory and mirrored to one directory each:
//   manifest.json   layout, history and redo descriptors
//   code.jpg        the original code as baseline JFIF
//   latent-N.f64    latent snapshots, raw little-endian doubles, planes in
//                   order, blocks in order, 64 natural-order values each
//   mask-NAME.png   8-bit gray, weight = value / 255
//   image-NAME.f64  raw little-endian doubles, planes in order, row-major
// The manifest is replaced atomically after every other file is written.
class SessionStore {
 public:
  // Loads every session found under dir (created if missing). Without a
  // directory the store is memory-only.
  explicit SessionStore(std::filesystem::path dir);

  std::shared_ptr<SessionSlot> Add(Session session);
  // Throws kNotFound.
  std::shared_ptr<SessionSlot> Find(const std::string& id) const;
  std::vector<std::string> Ids() const;
  void Remove(const std::string& id);
  // Writes pending files and the manifest. Call with the slot locked.
  void Persist(Session& session) const;
  std::string NewId() const;

  static Session Load(const std::filesystem::path& session_dir);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
};

}  // namespace ejpeg::service

#endif  // EJPEG_SERVICE_SESSION_STORE_H_
