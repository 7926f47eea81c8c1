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

#include "thermofoot/predict/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thermofoot/errors.hpp"
#include "thermofoot/nn/losses.hpp"
#include "thermofoot/nn/serialize.hpp"
#include "thermofoot/rng.hpp"

namespace thermo::predict {
namespace {

// Floor rule with the remainder going to train.
void sizes_for(int n, const SplitSpec& s, int& n_train, int& n_val, int& n_test) {
  if (s.train <= 0.0 || s.val <= 0.0 || s.test <= 0.0 ||
      std::abs(s.train + s.val + s.test - 1.0) > 1e-9)
    throw ConfigError("split fractions must be positive and sum to 1");
  n_val = static_cast<int>(std::floor(s.val * n));
  n_test = static_cast<int>(std::floor(s.test * n));
  n_train = n - n_val - n_test;
}

}  // namespace

Split split_dataset(int n, const SplitSpec& spec,
                    const std::vector<int>* binary_labels) {
  if (n < 3) throw CohortTooSmall("split needs at least 3 samples");
  Split out;

  auto allocate = [&](const std::vector<int>& pool, Rng& rng) {
    std::vector<int> idx = pool;
    rng.shuffle(idx);
    int n_train = 0, n_val = 0, n_test = 0;
    sizes_for(static_cast<int>(idx.size()), spec, n_train, n_val, n_test);
    out.val.insert(out.val.end(), idx.begin(), idx.begin() + n_val);
    out.test.insert(out.test.end(), idx.begin() + n_val, idx.begin() + n_val + n_test);
    out.train.insert(out.train.end(), idx.begin() + n_val + n_test, idx.end());
  };

  Rng rng(Rng::derive(spec.seed, 0x5051u));
  if (spec.stratify && binary_labels) {
    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i)
      ((*binary_labels)[static_cast<std::size_t>(i)] ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
      throw ClassAbsentInSplit("stratified split: a class is absent entirely");
    allocate(pos, rng);
    allocate(neg, rng);
  } else {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    allocate(all, rng);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  if (out.train.empty() || out.val.empty() || out.test.empty())
    throw CohortTooSmall("split produced an empty part");

  if (binary_labels) {
    for (const auto* part : {&out.train, &out.val, &out.test}) {
      bool has0 = false, has1 = false;
      for (int i : *part) {
        if ((*binary_labels)[static_cast<std::size_t>(i)]) has1 = true;
        else has0 = true;
      }
      if (!has0 || !has1)
        throw ClassAbsentInSplit("a split part lost one of the binary classes");
    }
  }
  return out;
}

double auc_score(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.empty()) throw EmptyTestSet("auc: empty test set");
  if (scores.size() != labels.size()) throw ShapeMismatch("auc: size mismatch");
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += l != 0;
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClassTestSet("auc undefined with a single class");

  // Midrank formulation.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> ranks(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k]) rank_sum_pos += ranks[k];
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double mean_absolute_error(const std::vector<double>& pred,
                           const std::vector<double>& truth) {
  if (pred.empty()) throw EmptyTestSet("mae: empty test set");
  if (pred.size() != truth.size()) throw ShapeMismatch("mae: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

PredictorCnn::PredictorCnn(int in_channels, TaskKind kind, PredictorConfig cfg)
    : kind_(kind), cfg_(std::move(cfg)) {
  net_.add(std::make_unique<nn::Conv2d>(in_channels, 16, 3, 2, 1, "block0"));
  net_.add(std::make_unique<nn::ReLU>());
  net_.add(std::make_unique<nn::Conv2d>(16, 32, 3, 2, 1, "block1"));
  net_.add(std::make_unique<nn::ReLU>());
  net_.add(std::make_unique<nn::Conv2d>(32, 64, 3, 2, 1, "block2"));
  net_.add(std::make_unique<nn::ReLU>());
  net_.add(std::make_unique<nn::Conv2d>(64, 64, 3, 2, 1, "block3"));
  net_.add(std::make_unique<nn::ReLU>());
  net_.add(std::make_unique<nn::GlobalAvgPool>());
  net_.add(std::make_unique<nn::Linear>(64, 1, "head"));

  Rng rng(Rng::derive(cfg_.train.seed, 0xC44u));
  net_.init_weights(rng);
  if (cfg_.backbone == "pretrained") {
    if (cfg_.pretrained_checkpoint.empty())
      throw ConfigError("backbone=pretrained requires pretrained_checkpoint");
    load(cfg_.pretrained_checkpoint);
  } else if (cfg_.backbone != "custom") {
    throw ConfigError("unknown backbone '" + cfg_.backbone + "'");
  }
}

nn::FitResult PredictorCnn::fit(const std::vector<const nn::Tensor*>& inputs,
                                const std::vector<double>& targets,
                                const Split& split) {
  if (split.train.empty() || split.val.empty())
    throw EmptyDataset("predictor: empty train or validation split");

  if (kind_ == TaskKind::regression) {
    // Standardize with training statistics only.
    double m = 0.0;
    for (int i : split.train) m += targets[static_cast<std::size_t>(i)];
    m /= static_cast<double>(split.train.size());
    double var = 0.0;
    for (int i : split.train) {
      const double d = targets[static_cast<std::size_t>(i)] - m;
      var += d * d;
    }
    var /= std::max<std::size_t>(1, split.train.size() - 1);
    target_mean_ = m;
    target_sd_ = std::sqrt(var) > 1e-12 ? std::sqrt(var) : 1.0;
  }

  auto forward_loss = [&](int i, bool backward) {
    const nn::Tensor& x = *inputs[static_cast<std::size_t>(i)];
    nn::Tensor out = net_.forward(x);
    nn::Tensor target({1});
    double loss = 0.0;
    nn::LossGrad lg;
    if (kind_ == TaskKind::binary) {
      target.data[0] = static_cast<float>(targets[static_cast<std::size_t>(i)]);
      lg = nn::bce_with_logits(out, target);
    } else {
      target.data[0] = static_cast<float>(
          (targets[static_cast<std::size_t>(i)] - target_mean_) / target_sd_);
      lg = nn::mse_loss(out, target);
    }
    loss = lg.loss;
    if (backward) net_.backward(lg.grad);
    return loss;
  };

  auto train_sample = [&](int k) {
    return forward_loss(split.train[static_cast<std::size_t>(k)], true);
  };
  auto validate = [&]() {
    // Validation metric: AUC for binary tasks (maximized), MAE in target
    // units for regression (minimized).
    if (kind_ == TaskKind::binary) {
      std::vector<double> scores;
      std::vector<int> labels;
      for (int i : split.val) {
        scores.push_back(score(*inputs[static_cast<std::size_t>(i)]));
        labels.push_back(targets[static_cast<std::size_t>(i)] != 0.0 ? 1 : 0);
      }
      return auc_score(scores, labels);
    }
    std::vector<double> pred, truth;
    for (int i : split.val) {
      pred.push_back(score(*inputs[static_cast<std::size_t>(i)]));
      truth.push_back(targets[static_cast<std::size_t>(i)]);
    }
    return mean_absolute_error(pred, truth);
  };

  std::vector<nn::Param*> params;
  net_.collect_params(params);
  return nn::fit(params, static_cast<int>(split.train.size()), cfg_.train,
                 /*maximize_metric=*/kind_ == TaskKind::binary, train_sample,
                 validate);
}

double PredictorCnn::score(const nn::Tensor& input) {
  nn::Tensor out = net_.forward(input);
  const double raw = out.data[0];
  if (kind_ == TaskKind::regression) return raw * target_sd_ + target_mean_;
  return raw;  // logit; monotone in probability, fine for ranking and AUC
}

EvalResult PredictorCnn::evaluate(const std::string& task_name,
                                  const std::vector<const nn::Tensor*>& inputs,
                                  const std::vector<double>& targets,
                                  const std::vector<int>& test_idx) {
  if (test_idx.empty()) throw EmptyTestSet("evaluate: empty test set");
  EvalResult result;
  result.task = task_name;
  result.test_size = static_cast<int>(test_idx.size());
  if (kind_ == TaskKind::binary) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i : test_idx) {
      scores.push_back(score(*inputs[static_cast<std::size_t>(i)]));
      labels.push_back(targets[static_cast<std::size_t>(i)] != 0.0 ? 1 : 0);
    }
    result.metric = "auc";
    result.value = auc_score(scores, labels);
  } else {
    std::vector<double> pred, truth;
    for (int i : test_idx) {
      pred.push_back(score(*inputs[static_cast<std::size_t>(i)]));
      truth.push_back(targets[static_cast<std::size_t>(i)]);
    }
    result.metric = "mae";
    result.value = mean_absolute_error(pred, truth);
  }
  return result;
}

void PredictorCnn::save(const std::string& path) {
  std::vector<nn::Param*> params;
  net_.collect_params(params);
  nn::save_params(path, params);
}

void PredictorCnn::load(const std::string& path) {
  std::vector<nn::Param*> params;
  net_.collect_params(params);
  nn::load_params(path, params);
}

}  // namespace thermo::predict
