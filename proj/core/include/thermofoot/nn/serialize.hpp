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

#include "thermofoot/nn/layers.hpp"
#include "thermofoot/nn/train.hpp"

namespace thermo::nn {

/// Checkpoint format: "TFCK" magic, version, then (name, size, float32 data)
/// per parameter, little-endian.
void save_params(const std::string& path, const std::vector<Param*>& params);

/// Loads a checkpoint into an existing parameter set; names and sizes must
/// match exactly.
void load_params(const std::string& path, const std::vector<Param*>& params);

/// Training log as JSON (per-epoch loss/metric/lr plus the best epoch).
void save_fit_log(const std::string& path, const FitResult& result,
                  const std::string& metric_name);

}  // namespace thermo::nn
