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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thermofoot/assoc/stat_tests.hpp"
#include "thermofoot/clinical/risk.hpp"
#include "thermofoot/types.hpp"

namespace thermo::assoc {

enum class Display { mean_sd, median_iqr, count_percent };

/// One report row definition: variable name, its distributional kind (which
/// fixes the test), and the summary display form.
struct VariableSchema {
  std::string name;
  VarKind kind = VarKind::continuous_skewed;
  Display display = Display::median_iqr;
  std::string label;  // human-readable row label
};

/// The default cohort-characteristics schema (demographics, neuropathy, PAD,
/// complications, impairments, composite scores, foot temperatures).
std::vector<VariableSchema> default_schema();

struct AssociationResult {
  VariableSchema schema;
  std::string summary_g1;
  std::string summary_g2;
  int n_used_g1 = 0;
  int n_used_g2 = 0;
  TestOutcome test;
};

struct TableOneReport {
  int n_cluster1 = 0;
  int n_cluster2 = 0;
  std::vector<AssociationResult> rows;
};

/// Pulls one variable's numeric value out of a record/profile; absent means
/// missing (dropped pairwise). Categorical variables map to 0/1.
using Extractor = std::function<std::optional<double>(
    const ParticipantRecord&, const clinical::RiskProfile&)>;

/// Registry of known variable names; throws UnknownField for anything else.
Extractor extractor_for(const std::string& name);

/// Builds the Table-1-style report: per-variable group summaries, the
/// kind-mapped test, and two-sided p-values. `assignments` holds labels 1/2
/// aligned with `records`.
TableOneReport table_one(const std::vector<ParticipantRecord>& records,
                         const std::vector<clinical::RiskProfile>& profiles,
                         const std::vector<int>& assignments,
                         const std::vector<VariableSchema>& schema);

/// p-value formatting used by the report: scientific below 0.01, otherwise
/// two decimals.
std::string format_p(double p);

std::string render_markdown(const TableOneReport& report);
std::string render_json(const TableOneReport& report);

}  // namespace thermo::assoc
