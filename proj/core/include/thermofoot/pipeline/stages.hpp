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

#include <string>
#include <vector>

#include "thermofoot/pipeline/config.hpp"

namespace thermo::pipeline {

/// Pipeline stages in run-all order. Each stage writes its artifacts under
/// <out_dir>/<stage>/ plus a provenance.json (stage, config hash, seed,
/// inputs, version), and fails with MissingPrerequisite when an upstream
/// artifact is absent.
void run_synth(const PipelineConfig& cfg);
void run_segment(const PipelineConfig& cfg);
void run_represent(const PipelineConfig& cfg);
void run_cluster(const PipelineConfig& cfg);
void run_profile(const PipelineConfig& cfg);
void run_associate(const PipelineConfig& cfg);
void run_predict(const PipelineConfig& cfg);
void run_all(const PipelineConfig& cfg);

const std::vector<std::string>& stage_names();
void run_stage(const std::string& name, const PipelineConfig& cfg);

}  // namespace thermo::pipeline
