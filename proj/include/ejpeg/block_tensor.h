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

#ifndef EJPEG_BLOCK_TENSOR_H_
#define EJPEG_BLOCK_TENSOR_H_

#include <vector>

#include "ejpeg/compressed_image.h"

namespace ejpeg {

// rows x cols x depth tensor; each block's coefficients form the depth fiber
// at its grid position. value(r, c, k) = values[(r * cols + c) * depth + k].
struct ChannelTensor {
  int rows = 0;
  int cols = 0;
  int depth = 0;
  std::vector<double> values;

  double at(int r, int c, int k) const {
    return values[(static_cast<size_t>(r) * cols + c) * depth + k];
  }
  bool operator==(const ChannelTensor&) const = default;
};

ChannelTensor TensorizeBlocks(const QuantizedPlane& plane);

// Inverse of TensorizeBlocks. Throws kDimensionMismatch unless depth is 64 and
// the value count matches; kInvalidArgument for non-integer values.
QuantizedPlane UntensorizeBlocks(const ChannelTensor& tensor,
                                 const QuantTable& table, ChannelId channel);

}  // namespace ejpeg

#endif  // EJPEG_BLOCK_TENSOR_H_
