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

#include "thermofoot/types.hpp"

namespace thermo::ingest {

/// The manifest CSV column set, in file order. Header is mandatory.
const std::vector<std::string>& manifest_columns();

/// Loads and validates a manifest. Referenced image files must exist unless
/// `check_files` is false (useful for record-only analyses).
/// Throws MissingFile, DuplicateId, or SchemaMismatch naming the offending
/// column or row.
Manifest load_manifest(const std::string& path, bool check_files = true);

/// Writes a manifest; loading the result reproduces the rows field-for-field.
void save_manifest(const Manifest& manifest, const std::string& path);

/// Loads one visual/thermal pair, enforcing registration (equal dimensions)
/// and finite in-range temperatures.
ImagePair load_image_pair(const ManifestEntry& entry, const std::string& base_dir);

/// Normalization window in degrees Celsius.
struct NormWindow {
  double lo = 20.0;
  double hi = 40.0;
};

/// Maps temperatures to the unit interval: clip((v-lo)/(hi-lo), 0, 1).
/// Throws DegenerateWindow when lo >= hi.
std::vector<float> normalize_thermal(const ThermalGrid& grid, NormWindow window);

/// Returns invariant violations ("field: rule"); empty means valid.
std::vector<std::string> validate_record(const ParticipantRecord& record);

// Record <-> CSV field conversions, shared by the manifest codec and tests.
std::vector<std::string> record_to_fields(const ManifestEntry& entry);
ManifestEntry fields_to_record(const std::vector<std::string>& fields);

}  // namespace thermo::ingest
