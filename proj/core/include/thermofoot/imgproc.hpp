// Copyright 2026 The thermofoot Authors
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

#pragma once

#include <vector>

#include "thermofoot/types.hpp"

namespace thermo::imgproc {

/// Single-channel float plane, row-major.
struct FloatPlane {
  int height = 0;
  int width = 0;
  std::vector<float> values;

  float& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
  float at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
};

/// Pads to a centered square with `fill`; extra pixel of padding goes after.
FloatPlane pad_to_square(const FloatPlane& in, float fill);
BinaryMask pad_to_square(const BinaryMask& in);

/// Bilinear resampling with half-pixel centers (align_corners = false).
FloatPlane resize_bilinear(const FloatPlane& in, int out_h, int out_w);

/// Nearest-neighbor resampling, used for masks.
BinaryMask resize_nearest(const BinaryMask& in, int out_h, int out_w);

/// Undo pad_to_square + resize for a mask: resize back to the padded square,
/// then crop the centered region of the original dimensions.
BinaryMask restore_mask(const BinaryMask& square_mask, int orig_h, int orig_w);

/// Connected components with 4-connectivity; returns per-pixel labels
/// (0 = background, 1..n = components) and the number of components.
std::pair<std::vector<int>, int> connected_components(const BinaryMask& mask);

}  // namespace thermo::imgproc
