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

#include "thermofoot/types.hpp"

namespace thermo::synth {

/// Geometry and temperature parameters for one generated visual/thermal pair.
/// Feet are two mirrored, rotated super-ellipses with toe bumps; the thermal
/// field is base + longitudinal gradient + optional hotspot + noise.
struct FootPairParams {
  int height = 224;
  int width = 224;
  double ambient_temp_c = 24.0;
  double base_temp_c = 30.0;
  double gradient_c = 3.8;            // heel-to-toe spread inside each foot
  double hotspot_amplitude_c = 0.0;   // 0 disables the hotspot
  double noise_sd_c = 0.12;           // thermal pixel noise
  double visual_noise_sd = 3.0;       // visual pixel noise
  double foot_scale = 1.0;            // silhouette size multiplier
  double rotation_deg = 4.0;          // outward rotation of each foot
};

/// One generated participant: registered pair, exact ground-truth mask,
/// planted cluster label, and a coupled clinical record.
struct GeneratedParticipant {
  ImagePair pair;
  BinaryMask truth_mask;
  ParticipantRecord record;
  int planted_cluster = 2;  // 1 = higher-risk pattern, 2 = lower-risk
  double hotspot_amplitude = 0.0;
};

struct CohortSpec {
  int n_participants = 282;
  std::vector<double> cluster_fractions = {123.0 / 282.0, 159.0 / 282.0};
  double separation = 1.0;       // >= 0; thermal effect size multiplier
  double risk_correlation = 1.0; // [0,1]; cluster -> clinical coupling
  std::uint64_t seed = 7;
  int image_height = 224;
  int image_width = 224;
  double hotspot_amplitude_c = 2.6;
  double hotspot_probability = 0.9;  // P(hotspot | cluster 1), scaled by separation
  double base_shift_c = 1.2;         // cluster-1 base temperature shift at separation 1
  double range_shrink = 0.35;        // cluster-1 gradient reduction at separation 1
  double missing_rate = 0.0;         // per-field missingness for mtcns/tbi/exam items
};

struct PlantedTruth {
  std::vector<std::string> participant_ids;
  std::vector<int> clusters;            // 1-based planted labels
  std::vector<double> hotspot_amplitudes;
};

/// Validates fractions (sum to 1 within 1e-9) and sizes; throws ConfigError.
void validate_spec(const CohortSpec& spec);

/// Planted labels for a spec: exact largest-remainder cluster sizes, shuffled
/// deterministically by the cohort seed.
std::vector<int> planted_assignments(const CohortSpec& spec);

/// One synthetic pair with an exact mask. Deterministic in (params, seed).
std::pair<ImagePair, BinaryMask> generate_foot_pair(const FootPairParams& params,
                                                    std::uint64_t seed);

/// Full in-memory participant: images plus coupled clinical record.
/// Per-participant seeds derive from (spec.seed, index), so generation order
/// does not matter.
GeneratedParticipant generate_participant(const CohortSpec& spec, int index,
                                          int planted_cluster);

/// Record-only fast path (no images); used by statistical calibration tests.
std::vector<ParticipantRecord> generate_records(const CohortSpec& spec,
                                                const std::vector<int>& clusters);

/// Generates a cohort on disk: ingest manifest + images/ + masks +
/// planted_truth.csv. Byte-identical for identical specs.
struct CohortPaths {
  std::string manifest;
  std::string planted_truth;
  std::string images_dir;
};
CohortPaths generate_cohort(const CohortSpec& spec, const std::string& out_dir,
                            PlantedTruth* truth_out = nullptr);

/// Simulates `n_raters` imperfect manual segmentations of a true mask by
/// perturbing the boundary with a per-rater bias and a smooth noise field.
std::vector<BinaryMask> simulate_raters(const BinaryMask& truth, int n_raters,
                                        std::uint64_t seed,
                                        double boundary_sd = 1.0);

/// Conventional path of the ground-truth mask for a cohort participant.
std::string mask_path_for(const std::string& visual_path);

}  // namespace thermo::synth
