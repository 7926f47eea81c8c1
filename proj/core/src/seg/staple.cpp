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

#include "thermofoot/seg/staple.hpp"

#include <cmath>

#include "thermofoot/errors.hpp"

namespace thermo::seg {

StapleResult staple_consensus(const std::vector<BinaryMask>& masks,
                              std::optional<double> prior, double tol,
                              int max_iter) {
  if (masks.size() < 2)
    throw NonBinaryInput("staple needs at least 2 rater masks, got " +
                         std::to_string(masks.size()));
  const int h = masks[0].height, w = masks[0].width;
  const std::size_t n = static_cast<std::size_t>(h) * w;
  for (const auto& m : masks) {
    if (m.height != h || m.width != w)
      throw DimensionMismatch("staple rater masks differ in size");
    for (auto v : m.values)
      if (v != 0 && v != 1)
        throw NonBinaryInput("staple input mask is not strictly binary");
  }
  const int r = static_cast<int>(masks.size());

  double f = 0.0;
  if (prior) {
    f = *prior;
  } else {
    for (const auto& m : masks)
      f += static_cast<double>(m.count()) / static_cast<double>(n);
    f /= r;
  }
  f = std::clamp(f, 1e-6, 1.0 - 1e-6);

  constexpr double kClamp = 1e-6;
  std::vector<double> p(r, 0.99), q(r, 0.99);
  std::vector<double> weights(n, f);

  StapleResult result;
  for (int iter = 0; iter < max_iter; ++iter) {
    // E-step: posterior of foot at each pixel given rater decisions.
    double max_change = 0.0;
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = f, b = 1.0 - f;
      for (int j = 0; j < r; ++j) {
        if (masks[j].values[i]) {
          a *= p[j];
          b *= 1.0 - q[j];
        } else {
          a *= 1.0 - p[j];
          b *= q[j];
        }
      }
      const double wnew = a / (a + b);
      ll += std::log(a + b);
      max_change = std::max(max_change, std::abs(wnew - weights[i]));
      weights[i] = wnew;
    }
    result.log_likelihood.push_back(ll);
    result.iterations = iter + 1;

    // M-step: per-rater sensitivity and specificity under the posterior.
    double wsum = 0.0;
    for (double v : weights) wsum += v;
    const double csum = static_cast<double>(n) - wsum;
    for (int j = 0; j < r; ++j) {
      double agree_fg = 0.0, agree_bg = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (masks[j].values[i])
          agree_fg += weights[i];
        else
          agree_bg += 1.0 - weights[i];
      }
      p[j] = wsum > 0.0 ? agree_fg / wsum : 0.5;
      q[j] = csum > 0.0 ? agree_bg / csum : 0.5;
      p[j] = std::clamp(p[j], kClamp, 1.0 - kClamp);
      q[j] = std::clamp(q[j], kClamp, 1.0 - kClamp);
    }

    if (max_change < tol && iter > 0) {
      result.converged = true;
      break;
    }
  }

  result.probability = std::move(weights);
  result.consensus.height = h;
  result.consensus.width = w;
  result.consensus.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.consensus.values[i] = result.probability[i] > 0.5 ? 1 : 0;
  result.raters.resize(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) result.raters[j] = {p[j], q[j]};
  return result;
}

}  // namespace thermo::seg
