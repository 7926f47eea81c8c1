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

#include "thermofoot/seg/metrics.hpp"

#include <limits>

#include "thermofoot/errors.hpp"

namespace thermo::seg {

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height != b.height || a.width != b.width)
    throw DimensionMismatch("iou: mask dimensions differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool va = a.values[i] != 0, vb = b.values[i] != 0;
    inter += va && vb;
    uni += va || vb;
  }
  if (uni == 0) return 1.0;  // vacuous agreement of two empty masks
  return static_cast<double>(inter) / static_cast<double>(uni);
}

SegmentedThermal mask_thermal(const ThermalGrid& thermal, const BinaryMask& mask) {
  if (thermal.height != mask.height || thermal.width != mask.width)
    throw DimensionMismatch("mask_thermal: dimensions differ");
  SegmentedThermal out;
  out.height = thermal.height;
  out.width = thermal.width;
  out.mask = mask;
  out.values.resize(thermal.values.size());
  const float nan = std::numeric_limits<float>::quiet_NaN();
  for (std::size_t i = 0; i < thermal.values.size(); ++i)
    out.values[i] = mask.values[i] ? thermal.values[i] : nan;
  return out;
}

}  // namespace thermo::seg
