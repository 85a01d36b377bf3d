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

#include "ejpeg/block_tensor.h"

#include <cmath>

#include "ejpeg/error.h"

namespace ejpeg {

ChannelTensor TensorizeBlocks(const QuantizedPlane& plane) {
  if (plane.block_count() == 0) {
    Fail(ErrorCode::kInvalidArgument, "cannot tensorize an empty block grid");
  }
  ChannelTensor t;
  t.rows = plane.block_rows;
  t.cols = plane.block_cols;
  t.depth = 64;
  t.values.assign(plane.coeffs.begin(), plane.coeffs.end());
  return t;
}

QuantizedPlane UntensorizeBlocks(const ChannelTensor& tensor,
                                 const QuantTable& table, ChannelId channel) {
  if (tensor.depth != 64 || tensor.rows < 1 || tensor.cols < 1 ||
      tensor.values.size() !=
          static_cast<size_t>(tensor.rows) * tensor.cols * 64) {
    Fail(ErrorCode::kDimensionMismatch,
         "tensor shape does not describe an 8x8 block grid");
  }
  QuantizedPlane plane(tensor.rows, tensor.cols, table, channel);
  for (size_t i = 0; i < tensor.values.size(); ++i) {
    const double v = tensor.values[i];
    if (v != std::trunc(v)) {
      Fail(ErrorCode::kInvalidArgument, "quantized tensor holds a non-integer");
    }
    plane.coeffs[i] = static_cast<int32_t>(v);
  }
  return plane;
}

}  // namespace ejpeg
