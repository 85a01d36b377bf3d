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

#include "ejpeg/color.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ejpeg/error.h"
#include "test_util.h"

namespace ejpeg {
namespace {

TEST(Color, GrayMapsToNeutralChroma) {
  for (double v : {0.0, 37.0, 128.0, 255.0}) {
    const auto ycc = RgbToYcbcr(v, v, v);
    EXPECT_NEAR(ycc[0], v, 1e-12);
    EXPECT_NEAR(ycc[1], 128.0, 1e-12);
    EXPECT_NEAR(ycc[2], 128.0, 1e-12);
  }
}

TEST(Color, Black) {
  const auto ycc = RgbToYcbcr(0, 0, 0);
  EXPECT_NEAR(ycc[0], 0.0, 1e-12);
  EXPECT_NEAR(ycc[1], 128.0, 1e-12);
  EXPECT_NEAR(ycc[2], 128.0, 1e-12);
}

TEST(Color, KnownPrimaries) {
  // Full-range BT.601: red -> (76.245, 84.97..., 255.5).
  const auto red = RgbToYcbcr(255, 0, 0);
  EXPECT_NEAR(red[0], 0.299 * 255, 1e-9);
  EXPECT_NEAR(red[2], 255.5, 1e-9);
  const auto blue = RgbToYcbcr(0, 0, 255);
  EXPECT_NEAR(blue[1], 255.5, 1e-9);
}

TEST(Color, RoundTripWithinOneGrayLevel) {
  std::mt19937 rng(7);
  const PixelImage rgb = testing::RandomImage(17, 9, 3, rng);
  const PixelImage back = YcbcrToRgb(RgbToYcbcr(rgb));
  EXPECT_LE(MaxAbsDifference(rgb, back), 1.0);
  // The matrices are exact inverses, so the error is only rounding noise.
  EXPECT_LT(MaxAbsDifference(rgb, back), 1e-9);
  // Rounded to 8 bits the round trip is the identity.
  EXPECT_EQ(back.Quantized8(), rgb.Quantized8());
}

TEST(Color, RejectsWrongChannelCount) {
  try {
    RgbToYcbcr(PixelImage(4, 4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW(YcbcrToRgb(PixelImage(4, 4, 1)), Error);
}

}  // namespace
}  // namespace ejpeg
