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

#include "thermofoot/nn/losses.hpp"

#include <cmath>

#include "thermofoot/errors.hpp"

namespace thermo::nn {

LossGrad mse_loss(const Tensor& y, const Tensor& target) {
  if (y.size() != target.size()) throw ShapeMismatch("mse_loss size mismatch");
  LossGrad out;
  out.grad = Tensor(y.shape);
  const double inv = 1.0 / static_cast<double>(y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = static_cast<double>(y.data[i]) - target.data[i];
    acc += d * d;
    out.grad.data[i] = static_cast<float>(2.0 * d * inv);
  }
  out.loss = acc * inv;
  return out;
}

double l1_error(const Tensor& y, const Tensor& target) {
  if (y.size() != target.size()) throw ShapeMismatch("l1_error size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    acc += std::abs(static_cast<double>(y.data[i]) - target.data[i]);
  return acc / static_cast<double>(y.size());
}

LossGrad bce_with_logits(const Tensor& logits, const Tensor& target) {
  if (logits.size() != target.size())
    throw ShapeMismatch("bce_with_logits size mismatch");
  LossGrad out;
  out.grad = Tensor(logits.shape);
  const double inv = 1.0 / static_cast<double>(logits.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double z = logits.data[i];
    const double t = target.data[i];
    acc += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
    const double p = 1.0 / (1.0 + std::exp(-z));
    out.grad.data[i] = static_cast<float>((p - t) * inv);
  }
  out.loss = acc * inv;
  return out;
}

LossGrad dice_with_logits(const Tensor& logits, const Tensor& target) {
  if (logits.size() != target.size())
    throw ShapeMismatch("dice_with_logits size mismatch");
  constexpr double kEps = 1.0;
  std::vector<double> p(logits.size());
  double inter = 0.0, psum = 0.0, tsum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = 1.0 / (1.0 + std::exp(-static_cast<double>(logits.data[i])));
    inter += p[i] * target.data[i];
    psum += p[i];
    tsum += target.data[i];
  }
  const double num = 2.0 * inter + kEps;
  const double den = psum + tsum + kEps;
  LossGrad out;
  out.loss = 1.0 - num / den;
  out.grad = Tensor(logits.shape);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double dldp = -(2.0 * target.data[i] * den - num) / (den * den);
    out.grad.data[i] = static_cast<float>(dldp * p[i] * (1.0 - p[i]));
  }
  return out;
}

}  // namespace thermo::nn
