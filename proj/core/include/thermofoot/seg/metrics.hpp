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

#include "thermofoot/types.hpp"

namespace thermo::seg {

/// Intersection over union. Both masks empty counts as perfect agreement
/// (1.0). Throws DimensionMismatch.
double iou(const BinaryMask& a, const BinaryMask& b);

/// Applies a mask to a thermal grid: retained pixels keep their exact bits,
/// background becomes the NaN sentinel. Throws DimensionMismatch.
SegmentedThermal mask_thermal(const ThermalGrid& thermal, const BinaryMask& mask);

}  // namespace thermo::seg
