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

#include "ejpeg/resample.h"

#include <algorithm>
#include <cmath>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

struct Tap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

Tap MakeTap(int dst, int dst_size, int src_size) {
  const double pos = (dst + 0.5) * src_size / dst_size - 0.5;
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(src_size - 1));
  const int i0 = static_cast<int>(std::floor(clamped));
  const int i1 = std::min(i0 + 1, src_size - 1);
  return {i0, i1, clamped - i0};
}

void CheckSizes(int w, int h) {
  if (w < 1 || h < 1) Fail(ErrorCode::kInvalidArgument, "resize to empty plane");
}

}  // namespace

Plane ResizeBilinear(const Plane& src, int width, int height) {
  CheckSizes(width, height);
  CheckSizes(src.width(), src.height());
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap ty = MakeTap(y, height, src.height());
    for (int x = 0; x < width; ++x) {
      const Tap tx = MakeTap(x, width, src.width());
      const double top = (1 - tx.w1) * src.at(tx.i0, ty.i0) + tx.w1 * src.at(tx.i1, ty.i0);
      const double bottom =
          (1 - tx.w1) * src.at(tx.i0, ty.i1) + tx.w1 * src.at(tx.i1, ty.i1);
      out.at(x, y) = (1 - ty.w1) * top + ty.w1 * bottom;
    }
  }
  return out;
}

Plane ResizeBilinearAdjoint(const Plane& gradient, int src_width,
                            int src_height) {
  CheckSizes(src_width, src_height);
  Plane out(src_width, src_height);
  for (int y = 0; y < gradient.height(); ++y) {
    const Tap ty = MakeTap(y, gradient.height(), src_height);
    for (int x = 0; x < gradient.width(); ++x) {
      const Tap tx = MakeTap(x, gradient.width(), src_width);
      const double g = gradient.at(x, y);
      out.at(tx.i0, ty.i0) += (1 - tx.w1) * (1 - ty.w1) * g;
      out.at(tx.i1, ty.i0) += tx.w1 * (1 - ty.w1) * g;
      out.at(tx.i0, ty.i1) += (1 - tx.w1) * ty.w1 * g;
      out.at(tx.i1, ty.i1) += tx.w1 * ty.w1 * g;
    }
  }
  return out;
}

double SampleBilinear(const Plane& src, double x, double y, double* coverage) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  double value = 0.0;
  double inside = 0.0;
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      const double w = (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy);
      const int xx = x0 + dx;
      const int yy = y0 + dy;
      if (w == 0.0) continue;
      if (xx >= 0 && yy >= 0 && xx < src.width() && yy < src.height()) {
        value += w * src.at(xx, yy);
        inside += w;
      }
    }
  }
  if (coverage) *coverage = inside;
  return value;
}

}  // namespace ejpeg
