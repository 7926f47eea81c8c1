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

#include "thermofoot/nn/train.hpp"

#include <algorithm>
#include <cmath>

#include "thermofoot/errors.hpp"

namespace thermo::nn {

Adam::Adam(std::vector<Param*> params, double lr, double beta1, double beta2,
           double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (auto* p : params_) {
    m_.emplace_back(p->value.size(), 0.0f);
    v_.emplace_back(p->value.size(), 0.0f);
  }
}

void Adam::zero_grad() {
  for (auto* p : params_) std::fill(p->grad.begin(), p->grad.end(), 0.0f);
}

void Adam::scale_grads(float factor) {
  for (auto* p : params_)
    for (auto& g : p->grad) g *= factor;
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    Param* p = params_[pi];
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad[i];
      m[i] = static_cast<float>(beta1_ * m[i] + (1.0 - beta1_) * g);
      v[i] = static_cast<float>(beta2_ * v[i] + (1.0 - beta2_) * g * g);
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p->value[i] -= static_cast<float>(lr_ * mhat / (std::sqrt(vhat) + eps_));
    }
  }
}

std::pair<std::vector<int>, std::vector<int>> train_val_split(
    int n, double val_fraction, std::uint64_t seed) {
  if (n < 1) throw EmptyDataset("cannot split an empty dataset");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n == 1) return {idx, idx};  // overfit-sanity mode: validate on the pair
  Rng rng(Rng::derive(seed, 0x5717u));
  rng.shuffle(idx);
  int n_val = static_cast<int>(std::floor(val_fraction * n));
  n_val = std::clamp(n_val, 1, n - 1);
  std::vector<int> val(idx.begin(), idx.begin() + n_val);
  std::vector<int> train(idx.begin() + n_val, idx.end());
  return {train, val};
}

FitResult fit(std::vector<Param*> params, int n_train, const TrainConfig& cfg,
              bool maximize_metric,
              const std::function<double(int)>& train_sample,
              const std::function<double()>& validate) {
  if (n_train < 1) throw EmptyDataset("no training samples");
  Adam adam(params, cfg.lr);
  Rng rng(Rng::derive(cfg.seed, 0x7121u));

  auto snapshot = [&params]() {
    std::vector<std::vector<float>> s;
    s.reserve(params.size());
    for (auto* p : params) s.push_back(p->value);
    return s;
  };
  auto restore = [&params](const std::vector<std::vector<float>>& s) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = s[i];
  };

  FitResult result;
  std::vector<std::vector<float>> best = snapshot();
  double best_metric = maximize_metric ? -1e300 : 1e300;
  int best_epoch = -1;
  int since_improve = 0;
  int since_plateau = 0;

  std::vector<int> order(n_train);
  for (int i = 0; i < n_train; ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    int processed = 0;
    while (processed < n_train) {
      const int bsz = std::min(cfg.batch_size, n_train - processed);
      adam.zero_grad();
      for (int b = 0; b < bsz; ++b)
        loss_sum += train_sample(order[processed + b]);
      adam.scale_grads(1.0f / static_cast<float>(bsz));
      adam.step();
      processed += bsz;
    }
    const double train_loss = loss_sum / n_train;
    if (!std::isfinite(train_loss))
      throw Error("training loss became non-finite at epoch " +
                  std::to_string(epoch));
    const double metric = validate();
    result.log.push_back({epoch, train_loss, metric, adam.lr()});

    const bool improved =
        maximize_metric ? metric > best_metric : metric < best_metric;
    if (improved) {
      best_metric = metric;
      best_epoch = epoch;
      best = snapshot();
      since_improve = 0;
      since_plateau = 0;
    } else {
      ++since_improve;
      ++since_plateau;
      if (since_plateau > cfg.plateau_patience && adam.lr() > cfg.lr_floor) {
        adam.set_lr(std::max(cfg.lr_floor, adam.lr() * cfg.plateau_factor));
        since_plateau = 0;
      }
      if (since_improve >= cfg.patience) {
        result.epochs_run = epoch + 1;
        break;
      }
    }
    result.epochs_run = epoch + 1;
  }

  restore(best);
  result.best_metric = best_metric;
  result.best_epoch = best_epoch;
  return result;
}

}  // namespace thermo::nn
