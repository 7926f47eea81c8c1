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
#include <string>
#include <vector>

#include "thermofoot/predict/predictor.hpp"
#include "thermofoot/synth/generator.hpp"

namespace thermo::pipeline {

struct SegmentationConfig {
  int n_truth = 60;       // pairs used for the rater/consensus ground-truth set
  int n_raters = 2;
  double rater_boundary_sd = 1.0;
  int input_size = 224;
  int base_channels = 16;
  int depth = 4;
  int epochs = 40;
  int patience = 10;
  double lr = 2e-3;
  int batch_size = 4;
  double val_fraction = 0.2;
  double staple_tol = 1e-7;
  int staple_max_iter = 100;
};

struct ConvAeConfig {
  int epochs = 50;
  int patience = 10;
  double lr = 1.5e-3;
  int batch_size = 8;
  double val_fraction = 0.15;
  double window_lo = 20.0;
  double window_hi = 40.0;
};

struct ClusteringConfig {
  int k_max = 10;
  bool standardize = false;
  double tsne_perplexity = 30.0;
  int tsne_iterations = 1000;
  int exemplars_m = 3;
};

struct TaskConfig {
  std::string name;
  std::string target;
  std::string kind = "binary";        // binary | regression
  std::string input = "thermal_only"; // thermal_only | thermal_plus_visual
};

struct PredictionConfig {
  int epochs = 30;
  int patience = 10;
  double lr = 1e-3;
  int batch_size = 8;
  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;
  std::string backbone = "custom";
  std::string pretrained_checkpoint;
  std::vector<TaskConfig> tasks = {
      {"neuropathy_thermal", "neuropathy_flag", "binary", "thermal_only"},
      {"mtcns_regression", "mtcns", "regression", "thermal_only"},
      {"tbi_regression", "tbi", "regression", "thermal_only"},
      {"pad_history_thermal_visual", "pad_clinical_history", "binary",
       "thermal_plus_visual"},
  };
};

/// Whole-pipeline configuration. Parsing is strict: unknown keys are a
/// ConfigError, and serialize -> parse round-trips exactly.
struct PipelineConfig {
  std::uint64_t seed = 7;
  std::string out_dir = "out";
  std::string manifest;          // empty: use the synth stage's cohort
  std::string coefficients;      // empty: built-in defaults
  synth::CohortSpec synth;
  SegmentationConfig segmentation;
  ConvAeConfig convae;
  ClusteringConfig clustering;
  PredictionConfig prediction;

  static PipelineConfig from_json_text(const std::string& text);
  static PipelineConfig load(const std::string& path);
  std::string to_json_text() const;
  void save(const std::string& path) const;

  /// SHA-256 of the canonical serialized form.
  std::string hash() const;
};

}  // namespace thermo::pipeline
