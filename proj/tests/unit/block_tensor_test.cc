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

#include <random>

#include <gtest/gtest.h>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

QuantizedPlane RandomPlane(int rows, int cols, std::mt19937& rng) {
  QuantizedPlane p(rows, cols, BaselineLumaTable(), ChannelId::kY);
  std::uniform_int_distribution<int> dist(-300, 300);
  for (int32_t& v : p.coeffs) v = dist(rng);
  return p;
}

TEST(BlockTensor, SingleBlock) {
  std::mt19937 rng(1);
  const QuantizedPlane p = RandomPlane(1, 1, rng);
  const ChannelTensor t = TensorizeBlocks(p);
  EXPECT_EQ(t.rows, 1);
  EXPECT_EQ(t.cols, 1);
  EXPECT_EQ(t.depth, 64);
  for (int k = 0; k < 64; ++k) EXPECT_EQ(t.at(0, 0, k), p.coeffs[k]);
}

TEST(BlockTensor, RoundTrip) {
  std::mt19937 rng(2);
  const QuantizedPlane p = RandomPlane(4, 6, rng);
  const QuantizedPlane back =
      UntensorizeBlocks(TensorizeBlocks(p), p.table, p.channel);
  EXPECT_EQ(back, p);
}

TEST(BlockTensor, LayoutPlacesBlockFiberAtGridPosition) {
  std::mt19937 rng(3);
  const QuantizedPlane p = RandomPlane(4, 6, rng);
  const ChannelTensor t = TensorizeBlocks(p);
  EXPECT_EQ(t.at(2, 3, 0), p.block(2 * 6 + 3)[0]);
  EXPECT_EQ(t.at(2, 3, 63), p.block(2 * 6 + 3)[63]);
}

TEST(BlockTensor, Errors) {
  EXPECT_THROW(TensorizeBlocks(QuantizedPlane()), Error);
  ChannelTensor t{2, 2, 64, std::vector<double>(2 * 2 * 64 - 1, 0.0)};
  try {
    UntensorizeBlocks(t, BaselineLumaTable(), ChannelId::kY);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  ChannelTensor wrong_depth{1, 1, 256, std::vector<double>(256, 0.0)};
  EXPECT_THROW(UntensorizeBlocks(wrong_depth, BaselineLumaTable(),
                                 ChannelId::kY),
               Error);
  ChannelTensor fractional{1, 1, 64, std::vector<double>(64, 0.5)};
  EXPECT_THROW(
      UntensorizeBlocks(fractional, BaselineLumaTable(), ChannelId::kY),
      Error);
}

}  // namespace
}  // namespace ejpeg
