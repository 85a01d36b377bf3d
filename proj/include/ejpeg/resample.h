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

#ifndef EJPEG_RESAMPLE_H_
#define EJPEG_RESAMPLE_H_

#include "ejpeg/image.h"

namespace ejpeg {

// Bilinear resize with pixel-center alignment and edge clamping.
Plane ResizeBilinear(const Plane& src, int width, int height);
// Adjoint of ResizeBilinear: maps a gradient on the resized plane back onto
// a src_width x src_height plane.
Plane ResizeBilinearAdjoint(const Plane& gradient, int src_width,
                            int src_height);

// Bilinear sample at a real position; positions outside [0, w-1] x [0, h-1]
// return 0. *coverage (when given) receives the fraction of the four taps
// that fell inside the plane.
double SampleBilinear(const Plane& src, double x, double y,
                      double* coverage = nullptr);

}  // namespace ejpeg

#endif  // EJPEG_RESAMPLE_H_
