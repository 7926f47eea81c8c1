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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thermofoot/nn/layers.hpp"

namespace thermo::nn {

/// Adam optimizer over a fixed parameter set.
class Adam {
 public:
  Adam(std::vector<Param*> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);
  void zero_grad();
  void scale_grads(float factor);
  void step();
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

 private:
  std::vector<Param*> params_;
  std::vector<std::vector<float>> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
};

/// Shared training knobs. Validation drives both early stopping (patience
/// epochs without improvement) and reduce-on-plateau learning-rate halving.
struct TrainConfig {
  int max_epochs = 60;
  int patience = 10;
  double lr = 1e-3;
  int batch_size = 8;
  double plateau_factor = 0.5;
  int plateau_patience = 4;
  double lr_floor = 1e-5;
  double val_fraction = 0.15;
  std::uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_metric = 0.0;
  double lr = 0.0;
};

struct FitResult {
  std::vector<EpochLog> log;
  double best_metric = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
};

/// Runs the epoch loop: deterministic shuffling, gradient accumulation over
/// batches, Adam steps, plateau LR schedule, early stopping, and best-weight
/// restoration. `train_sample` does forward+backward for one training index
/// and returns its loss; `validate` returns the epoch's validation metric.
FitResult fit(std::vector<Param*> params, int n_train, const TrainConfig& cfg,
              bool maximize_metric,
              const std::function<double(int)>& train_sample,
              const std::function<double()>& validate);

/// Deterministic split of 0..n-1 into train/validation index lists.
std::pair<std::vector<int>, std::vector<int>> train_val_split(
    int n, double val_fraction, std::uint64_t seed);

}  // namespace thermo::nn
