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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermofoot/types.hpp"

namespace thermo::clinical {

/// Named coefficients for the composite scores, loadable from a plain-text
/// name=value file so published coefficient sets can be dropped in.
struct CoefficientTable {
  std::map<std::string, double> values;

  static CoefficientTable defaults();
  static CoefficientTable load(const std::string& path);
  void save(const std::string& path) const;
  double at(const std::string& name) const;  // throws MissingCoefficients
};

/// Thresholds stated with the cohort characteristics table.
constexpr int kNeuropathyMtcnsThreshold = 3;     // neuropathy if mTCNS >= 3
constexpr double kPadTbiThreshold = 0.71;        // PAD if TBI <= 0.71

/// neuropathy = (mTCNS >= 3); PAD = (TBI <= 0.71). Missing inputs propagate.
std::pair<std::optional<bool>, std::optional<bool>> derive_flags(
    const ParticipantRecord& record);

/// Sum of four unit-weight binary items: monofilament insensitivity, PAD
/// flag, prior ulcer, prior amputation (weights overridable via the table).
/// Throws MissingField naming the absent input.
int podus_score(const ParticipantRecord& record, const CoefficientTable& coeffs);

/// High-risk foot rule: prior ulcer/amputation, or at least 2 of
/// {neuropathy, PAD, physical impairment, visual impairment}.
bool sign_high_risk(const ParticipantRecord& record);

/// Linear predictor: intercept + sum of coefficient * item over
/// {neuropathy flag, PAD flag, complication count, physical impairment}.
double martins_mendes_score(const ParticipantRecord& record,
                            const CoefficientTable& coeffs);

/// Cardinality of the recorded complication set.
int count_complications(const ParticipantRecord& record);

struct TempStats {
  double min_c = 0.0;
  double max_c = 0.0;
  double range_c = 0.0;
  double mean_c = 0.0;
};

/// Statistics over all retained (foot) pixels of both feet jointly.
/// Throws EmptyRegion when the mask retains nothing.
TempStats foot_temperature_stats(const SegmentedThermal& segmented);

/// Per-foot statistics for completeness: the two largest 4-connected
/// components, reported left (smaller mean column) first. A single component
/// is reported for both feet.
std::pair<TempStats, TempStats> per_foot_temperature_stats(
    const SegmentedThermal& segmented);

/// Everything derived for one participant.
struct RiskProfile {
  std::string participant_id;
  std::optional<bool> neuropathy_flag;
  std::optional<bool> pad_flag;
  std::optional<int> podus;
  std::optional<bool> podus_ge1;
  std::optional<bool> sign_high_risk;
  std::optional<double> martins_mendes;
  int n_complications = 0;
  std::optional<TempStats> temps;
};

/// Derives the full profile; score fields stay missing when their inputs are
/// missing (never defaulted).
RiskProfile derive_profile(const ParticipantRecord& record,
                           const SegmentedThermal* segmented,
                           const CoefficientTable& coeffs);

void write_risk_profiles_csv(const std::string& path,
                             const std::vector<RiskProfile>& profiles);
std::vector<RiskProfile> read_risk_profiles_csv(const std::string& path);

}  // namespace thermo::clinical
