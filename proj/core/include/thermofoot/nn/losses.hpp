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

#include <utility>

#include "thermofoot/nn/tensor.hpp"

namespace thermo::nn {

struct LossGrad {
  double loss = 0.0;
  Tensor grad;  // d loss / d input
};

/// Mean squared error over all elements.
LossGrad mse_loss(const Tensor& y, const Tensor& target);

/// Mean absolute error (metric only, no gradient).
double l1_error(const Tensor& y, const Tensor& target);

/// Numerically stable per-element binary cross-entropy on logits.
LossGrad bce_with_logits(const Tensor& logits, const Tensor& target);

/// Soft overlap (Dice) loss on logits: 1 - 2*sum(p*t)/(sum(p)+sum(t)),
/// with p = sigmoid(logits).
LossGrad dice_with_logits(const Tensor& logits, const Tensor& target);

}  // namespace thermo::nn
