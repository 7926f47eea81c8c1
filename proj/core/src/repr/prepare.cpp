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

#include <algorithm>
#include <cmath>

#include "thermofoot/errors.hpp"
#include "thermofoot/imgproc.hpp"
#include "thermofoot/repr/convae.hpp"

namespace thermo::repr {

nn::Tensor prepare_input(const SegmentedThermal& segmented,
                         ingest::NormWindow window) {
  if (segmented.mask.count() == 0)
    throw EmptyRegion("prepare_input: no foot pixels in segmented thermal");
  if (!(window.lo < window.hi))
    throw DegenerateWindow("prepare_input: window lo >= hi");

  imgproc::FloatPlane plane;
  plane.height = segmented.height;
  plane.width = segmented.width;
  plane.values.resize(segmented.values.size());
  const double span = window.hi - window.lo;
  for (std::size_t i = 0; i < segmented.values.size(); ++i) {
    if (segmented.mask.values[i]) {
      const double u = (segmented.values[i] - window.lo) / span;
      plane.values[i] = static_cast<float>(std::clamp(u, 0.0, 1.0));
    } else {
      plane.values[i] = 0.0f;  // background contributes nothing downstream
    }
  }
  plane = imgproc::pad_to_square(plane, 0.0f);
  plane = imgproc::resize_bilinear(plane, kInputSide, kInputSide);

  nn::Tensor out({3, kInputSide, kInputSide});
  for (int ch = 0; ch < 3; ++ch)
    std::copy(plane.values.begin(), plane.values.end(),
              out.data.begin() +
                  static_cast<std::size_t>(ch) * kInputSide * kInputSide);
  return out;
}

std::vector<float> flatten_latent(const LatentRep& rep) {
  return rep.values.data;  // storage is already channel-major (c,h,w)
}

LatentRep unflatten_latent(const std::vector<float>& v,
                           const std::string& participant_id) {
  if (v.size() != static_cast<std::size_t>(kLatentLength))
    throw ShapeMismatch("latent vector has length " + std::to_string(v.size()) +
                        ", expected " + std::to_string(kLatentLength));
  LatentRep rep;
  rep.participant_id = participant_id;
  rep.values = nn::Tensor({kLatentChannels, kLatentSide, kLatentSide}, v);
  return rep;
}

}  // namespace thermo::repr
