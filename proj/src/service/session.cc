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

#include "ejpeg/service/session.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ejpeg/codec.h"
#include "ejpeg/error.h"
#include "ejpeg/image_io.h"
#include "ejpeg/jfif.h"

namespace ejpeg::service {

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool ValidResourceName(const std::string& name) {
  if (name.empty() || name.size() > 64) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void Session::Push(LatentField latent, std::string descriptor) {
  if (!latent.Matches(code)) {
    Fail(ErrorCode::kDimensionMismatch, "latent does not match the session code");
  }
  if (!latent.AllFinite()) Fail(ErrorCode::kNumerical, "latent is not finite");
  history.push_back({std::move(latent), std::move(descriptor), ""});
  redo.clear();
  modified_ms = NowMs();
}

bool Session::Undo() {
  if (history.size() <= 1) return false;
  redo.push_back(std::move(history.back()));
  history.pop_back();
  modified_ms = NowMs();
  return true;
}

bool Session::Redo() {
  if (redo.empty()) return false;
  history.push_back(std::move(redo.back()));
  redo.pop_back();
  modified_ms = NowMs();
  return true;
}

ConsistentImage Session::Current() const { return Reconstruct(code, latent()); }

void Session::PutMask(const std::string& name, RegionMask mask) {
  if (!ValidResourceName(name)) Fail(ErrorCode::kInvalidArgument, "invalid mask name");
  if (mask.width() != code.width || mask.height() != code.height) {
    Fail(ErrorCode::kDimensionMismatch, "mask size differs from the image size");
  }
  // Stored as 8-bit gray, so quantize now to keep reloads bit-exact.
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      mask.at(x, y) = std::round(std::clamp(mask.at(x, y), 0.0, 1.0) * 255.0) / 255.0;
    }
  }
  masks[name] = std::move(mask);
  unsaved.insert("mask:" + name);
  modified_ms = NowMs();
}

void Session::PutImage(const std::string& name, PixelImage image) {
  if (!ValidResourceName(name)) Fail(ErrorCode::kInvalidArgument, "invalid image name");
  images[name] = std::move(image);
  unsaved.insert("image:" + name);
  modified_ms = NowMs();
}

const RegionMask& Session::Mask(const std::string& name) const {
  auto it = masks.find(name);
  if (it == masks.end()) Fail(ErrorCode::kNotFound, "no mask named '" + name + "'");
  return it->second;
}

const PixelImage& Session::Image(const std::string& name) const {
  auto it = images.find(name);
  if (it == images.end()) Fail(ErrorCode::kNotFound, "no image named '" + name + "'");
  return it->second;
}

Session NewSession(const std::string& id, std::span<const uint8_t> upload,
                   int qf, Sampling sampling) {
  Session s;
  s.id = id;
  if (LooksLikeJpeg(upload)) {
    s.code = ParseJfif(upload);
  } else {
    const PixelImage image = DecodeImage(upload);
    if (qf <= 0) {
      Fail(ErrorCode::kInvalidArgument, "uncompressed uploads need a qf parameter");
    }
    s.code = EncodePipeline(image, qf, sampling);
  }
  s.created_ms = s.modified_ms = NowMs();
  s.history.push_back({LatentField::Neutral(s.code), R"({"tool":"create"})", ""});
  return s;
}

}  // namespace ejpeg::service
