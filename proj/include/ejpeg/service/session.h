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

#ifndef EJPEG_SERVICE_SESSION_H_
#define EJPEG_SERVICE_SESSION_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ejpeg/compressed_image.h"
#include "ejpeg/consistency.h"
#include "ejpeg/image.h"

namespace ejpeg::service {

struct HistoryEntry {
  LatentField latent;
  std::string descriptor;  // JSON text describing the edit
  std::string snapshot;    // latent file name once persisted
};

// One explored image. history.back() is the current state; the root entry
// (the neutral latent) is never popped.
struct Session {
  std::string id;
  CompressedImage code;
  std::vector<HistoryEntry> history;
  std::vector<HistoryEntry> redo;
  std::map<std::string, RegionMask> masks;
  std::map<std::string, PixelImage> images;
  int64_t created_ms = 0;
  int64_t modified_ms = 0;
  int next_snapshot = 0;
  // Masks and images changed since the last save, as "mask:name" and
  // "image:name".
  std::set<std::string> unsaved;

  const LatentField& latent() const { return history.back().latent; }
  // Pushes a new current state and clears the redo stack. Throws
  // kNumerical for a non-finite latent and kDimensionMismatch for a latent
  // of the wrong shape.
  void Push(LatentField latent, std::string descriptor);
  // Return false (and change nothing) when there is nothing to undo/redo.
  bool Undo();
  bool Redo();

  ConsistentImage Current() const;
  // Weights are clamped to [0, 1] and quantized to k / 255.
  void PutMask(const std::string& name, RegionMask mask);
  void PutImage(const std::string& name, PixelImage image);
  // Throw kNotFound.
  const RegionMask& Mask(const std::string& name) const;
  const PixelImage& Image(const std::string& name) const;
};

// Session from an upload: a baseline JFIF stream, or a PNG/PNM image encoded
// with qf and sampling. Throws kUnsupportedFormat and kParseError from the
// parser, kInvalidArgument when an image arrives without a qf.
Session NewSession(const std::string& id, std::span<const uint8_t> upload,
                   int qf, Sampling sampling);

// Names of masks and images: 1-64 characters of [A-Za-z0-9_-].
bool ValidResourceName(const std::string& name);

int64_t NowMs();

}  // namespace ejpeg::service

#endif  // EJPEG_SERVICE_SESSION_H_
