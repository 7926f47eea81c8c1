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
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace thermo {

/// 2D temperature grid in degrees Celsius, row-major.
struct ThermalGrid {
  int height = 0;
  int width = 0;
  std::vector<float> values;
  float valid_lo = -40.0f;  // plausible-physics bounds, checked on load
  float valid_hi = 80.0f;

  float& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
  float at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
  std::size_t size() const { return values.size(); }
};

/// 8-bit RGB image, row-major, interleaved channels.
struct VisualImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // height*width*3

  std::uint8_t& at(int r, int c, int ch) {
    return pixels[(static_cast<std::size_t>(r) * width + c) * 3 + ch];
  }
  std::uint8_t at(int r, int c, int ch) const {
    return pixels[(static_cast<std::size_t>(r) * width + c) * 3 + ch];
  }
};

/// Registered visual/thermal pair for one participant. Registration means the
/// two rasters share the pixel grid; the loader enforces equal dimensions.
struct ImagePair {
  std::string participant_id;
  VisualImage visual;
  ThermalGrid thermal;
};

/// Strictly binary mask; 1 = foot, 0 = background.
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;

  std::uint8_t& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
  std::uint8_t at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto v : values) n += v;
    return n;
  }
};

/// Foot-segmented thermal grid. Retained pixels keep their exact values; the
/// background holds a quiet-NaN sentinel and the mask records which is which.
struct SegmentedThermal {
  int height = 0;
  int width = 0;
  std::vector<float> values;  // NaN outside the mask
  BinaryMask mask;
};

enum class Sex { male, female };
enum class ExamResult { normal, impaired };

/// Clinical fields for one participant. Absent optionals mean "recorded as
/// missing": downstream statistics drop them pairwise, never default them.
struct ParticipantRecord {
  std::string participant_id;
  std::optional<double> age;                 // years
  std::optional<Sex> sex;
  std::optional<double> diabetes_duration;   // years
  std::optional<int> mtcns;                  // 0..33
  std::optional<double> tbi;                 // >= 0
  std::optional<bool> pad_clinical_history;
  std::optional<bool> prior_ulcer;
  std::optional<bool> prior_amputation;
  std::optional<std::set<std::string>> complications;
  std::optional<bool> physical_impairment;
  std::optional<bool> visual_impairment;
  std::optional<bool> monofilament_insensitive;
  // Optional exam items.
  std::optional<ExamResult> pinprick;
  std::optional<ExamResult> vibration_sense;
  std::optional<ExamResult> light_touch;
  std::optional<ExamResult> position_sense;
  std::optional<ExamResult> temperature_sense;

  bool operator==(const ParticipantRecord&) const = default;
};

/// One manifest row: image file locations plus the clinical record.
struct ManifestEntry {
  std::string participant_id;
  std::string visual_path;   // relative to the manifest directory
  std::string thermal_path;
  ParticipantRecord record;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::string base_dir;  // directory the manifest file lives in
  std::vector<ManifestEntry> entries;
};

}  // namespace thermo
