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

#include <optional>
#include <vector>

#include "thermofoot/types.hpp"

namespace thermo::seg {

/// Per-rater performance estimate: p = sensitivity, q = specificity.
struct RaterPerformance {
  double p = 0.0;
  double q = 0.0;
};

struct StapleResult {
  std::vector<double> probability;      // per-pixel P(true = foot)
  BinaryMask consensus;                 // probability > 0.5
  std::vector<RaterPerformance> raters;
  std::vector<double> log_likelihood;   // one entry per EM iteration
  int iterations = 0;
  bool converged = false;
};

/// Binary STAPLE: EM estimation of the latent true segmentation and of each
/// rater's sensitivity/specificity. Iterates until the largest per-pixel
/// change of the posterior falls below `tol` or `max_iter` is reached.
/// `prior` is the foreground probability; when absent it defaults to the mean
/// foreground fraction across raters. Throws DimensionMismatch or
/// NonBinaryInput.
StapleResult staple_consensus(const std::vector<BinaryMask>& masks,
                              std::optional<double> prior = std::nullopt,
                              double tol = 1e-7, int max_iter = 100);

}  // namespace thermo::seg
