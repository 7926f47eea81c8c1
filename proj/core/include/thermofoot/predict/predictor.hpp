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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thermofoot/nn/layers.hpp"
#include "thermofoot/nn/train.hpp"

namespace thermo::predict {

enum class TaskKind { binary, regression };
enum class InputMode { thermal_only, thermal_plus_visual };

struct PredictionTask {
  std::string name;
  std::string target;  // report-variable name, resolved by the pipeline
  TaskKind kind = TaskKind::binary;
  InputMode input = InputMode::thermal_only;
};

struct SplitSpec {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
  bool stratify = false;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<int> train, val, test;
};

/// Deterministic disjoint exhaustive split. Unstratified sizes follow the
/// floor rule with the remainder going to train; stratified splits apply the
/// same rule within each class. Binary targets must keep both classes in
/// every part, else ClassAbsentInSplit. Throws CohortTooSmall when a part
/// would be empty.
Split split_dataset(int n, const SplitSpec& spec,
                    const std::vector<int>* binary_labels = nullptr);

/// Rank-based AUC with midrank tie handling. Throws EmptyTestSet /
/// SingleClassTestSet.
double auc_score(const std::vector<double>& scores, const std::vector<int>& labels);

double mean_absolute_error(const std::vector<double>& pred,
                           const std::vector<double>& truth);

struct PredictorConfig {
  int input_size = 224;
  std::string backbone = "custom";      // "custom" | "pretrained"
  std::string pretrained_checkpoint;    // required for backbone=pretrained
  nn::TrainConfig train{.max_epochs = 30, .patience = 10, .lr = 1e-3,
                        .batch_size = 8};
};

struct EvalResult {
  std::string task;
  std::string metric;  // "auc" | "mae"
  double value = 0.0;
  int test_size = 0;
};

/// Four stride-2 conv blocks, global average pooling, and a linear head.
/// Regression targets are standardized internally using training statistics.
class PredictorCnn {
 public:
  PredictorCnn(int in_channels, TaskKind kind, PredictorConfig cfg);

  nn::FitResult fit(const std::vector<const nn::Tensor*>& inputs,
                    const std::vector<double>& targets, const Split& split);

  /// Raw score: logit for binary tasks, de-standardized value for regression.
  double score(const nn::Tensor& input);

  EvalResult evaluate(const std::string& task_name,
                      const std::vector<const nn::Tensor*>& inputs,
                      const std::vector<double>& targets,
                      const std::vector<int>& test_idx);

  void save(const std::string& path);
  void load(const std::string& path);

 private:
  TaskKind kind_;
  PredictorConfig cfg_;
  nn::Sequential net_;
  double target_mean_ = 0.0;
  double target_sd_ = 1.0;
};

}  // namespace thermo::predict
