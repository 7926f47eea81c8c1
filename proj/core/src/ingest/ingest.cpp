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

#include "thermofoot/ingest/ingest.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <unordered_set>

#include "thermofoot/errors.hpp"
#include "thermofoot/io/csv.hpp"
#include "thermofoot/io/image_io.hpp"

namespace fs = std::filesystem;

namespace thermo::ingest {
namespace {

std::string bool_to_field(const std::optional<bool>& v) {
  if (!v) return "";
  return *v ? "1" : "0";
}

std::optional<bool> field_to_bool(const std::string& s, const std::string& col) {
  if (s.empty()) return std::nullopt;
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw SchemaMismatch("column " + col + ": expected boolean, got '" + s + "'");
}

std::string exam_to_field(const std::optional<ExamResult>& v) {
  if (!v) return "";
  return *v == ExamResult::impaired ? "impaired" : "normal";
}

std::optional<ExamResult> field_to_exam(const std::string& s, const std::string& col) {
  if (s.empty()) return std::nullopt;
  if (s == "impaired") return ExamResult::impaired;
  if (s == "normal") return ExamResult::normal;
  throw SchemaMismatch("column " + col + ": expected normal/impaired, got '" + s + "'");
}

template <class T>
std::string num_to_field(const std::optional<T>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

std::optional<double> field_to_double(const std::string& s, const std::string& col) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaMismatch("column " + col + ": expected number, got '" + s + "'");
  }
}

std::optional<int> field_to_int(const std::string& s, const std::string& col) {
  const auto d = field_to_double(s, col);
  if (!d) return std::nullopt;
  if (*d != std::floor(*d))
    throw SchemaMismatch("column " + col + ": expected integer, got '" + s + "'");
  return static_cast<int>(*d);
}

}  // namespace

const std::vector<std::string>& manifest_columns() {
  static const std::vector<std::string> cols = {
      "participant_id", "visual_path", "thermal_path", "age", "sex",
      "diabetes_duration", "mtcns", "tbi", "pad_clinical_history",
      "prior_ulcer", "prior_amputation", "complications",
      "physical_impairment", "visual_impairment", "monofilament_insensitive",
      "pinprick", "vibration_sense", "light_touch", "position_sense",
      "temperature_sense"};
  return cols;
}

std::vector<std::string> record_to_fields(const ManifestEntry& e) {
  const ParticipantRecord& r = e.record;
  std::string comps;
  if (r.complications) {
    bool first = true;
    for (const auto& c : *r.complications) {
      if (!first) comps.push_back(';');
      comps += c;
      first = false;
    }
    if (r.complications->empty()) comps = "-";  // present-but-empty marker
  }
  std::string sex;
  if (r.sex) sex = *r.sex == Sex::male ? "male" : "female";
  return {e.participant_id,
          e.visual_path,
          e.thermal_path,
          num_to_field(r.age),
          sex,
          num_to_field(r.diabetes_duration),
          num_to_field(r.mtcns),
          num_to_field(r.tbi),
          bool_to_field(r.pad_clinical_history),
          bool_to_field(r.prior_ulcer),
          bool_to_field(r.prior_amputation),
          comps,
          bool_to_field(r.physical_impairment),
          bool_to_field(r.visual_impairment),
          bool_to_field(r.monofilament_insensitive),
          exam_to_field(r.pinprick),
          exam_to_field(r.vibration_sense),
          exam_to_field(r.light_touch),
          exam_to_field(r.position_sense),
          exam_to_field(r.temperature_sense)};
}

ManifestEntry fields_to_record(const std::vector<std::string>& f) {
  ManifestEntry e;
  e.participant_id = f[0];
  e.visual_path = f[1];
  e.thermal_path = f[2];
  ParticipantRecord& r = e.record;
  r.participant_id = f[0];
  r.age = field_to_double(f[3], "age");
  if (!f[4].empty()) {
    if (f[4] == "male") r.sex = Sex::male;
    else if (f[4] == "female") r.sex = Sex::female;
    else throw SchemaMismatch("column sex: expected male/female, got '" + f[4] + "'");
  }
  r.diabetes_duration = field_to_double(f[5], "diabetes_duration");
  r.mtcns = field_to_int(f[6], "mtcns");
  r.tbi = field_to_double(f[7], "tbi");
  r.pad_clinical_history = field_to_bool(f[8], "pad_clinical_history");
  r.prior_ulcer = field_to_bool(f[9], "prior_ulcer");
  r.prior_amputation = field_to_bool(f[10], "prior_amputation");
  if (!f[11].empty()) {
    std::set<std::string> comps;
    if (f[11] != "-") {
      std::stringstream ss(f[11]);
      std::string item;
      while (std::getline(ss, item, ';'))
        if (!item.empty()) comps.insert(item);
    }
    r.complications = std::move(comps);
  }
  r.physical_impairment = field_to_bool(f[12], "physical_impairment");
  r.visual_impairment = field_to_bool(f[13], "visual_impairment");
  r.monofilament_insensitive = field_to_bool(f[14], "monofilament_insensitive");
  r.pinprick = field_to_exam(f[15], "pinprick");
  r.vibration_sense = field_to_exam(f[16], "vibration_sense");
  r.light_touch = field_to_exam(f[17], "light_touch");
  r.position_sense = field_to_exam(f[18], "position_sense");
  r.temperature_sense = field_to_exam(f[19], "temperature_sense");
  return e;
}

Manifest load_manifest(const std::string& path, bool check_files) {
  if (!fs::exists(path)) throw MissingFile("manifest not found: " + path);
  const auto rows = io::read_csv(path);
  if (rows.empty()) throw SchemaMismatch("manifest has no header row: " + path);

  const auto& expected = manifest_columns();
  const auto& header = rows[0];
  if (header.size() != expected.size()) {
    throw SchemaMismatch("manifest header has " + std::to_string(header.size()) +
                         " columns, expected " + std::to_string(expected.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (header[i] != expected[i])
      throw SchemaMismatch("manifest column " + std::to_string(i + 1) +
                           " is '" + header[i] + "', expected '" + expected[i] + "'");
  }

  Manifest m;
  m.base_dir = fs::path(path).parent_path().string();
  std::unordered_set<std::string> seen;
  std::vector<std::string> bad_rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != expected.size()) {
      bad_rows.push_back("row " + std::to_string(i + 1) + ": has " +
                         std::to_string(rows[i].size()) + " fields");
      continue;
    }
    try {
      ManifestEntry e = fields_to_record(rows[i]);
      if (!seen.insert(e.participant_id).second)
        throw DuplicateId("duplicate participant_id '" + e.participant_id +
                          "' at row " + std::to_string(i + 1));
      m.entries.push_back(std::move(e));
    } catch (const DuplicateId&) {
      throw;
    } catch (const SchemaMismatch& ex) {
      bad_rows.push_back("row " + std::to_string(i + 1) + ": " + ex.what());
    }
  }
  if (!bad_rows.empty()) {
    std::string msg = "manifest has unparseable rows:";
    for (const auto& b : bad_rows) msg += "\n  " + b;
    throw SchemaMismatch(msg);
  }
  if (check_files) {
    for (const auto& e : m.entries) {
      for (const auto& p : {e.visual_path, e.thermal_path}) {
        const fs::path full = fs::path(m.base_dir) / p;
        if (!fs::exists(full))
          throw MissingFile("manifest references missing file: " + full.string());
      }
    }
  }
  return m;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back(manifest_columns());
  for (const auto& e : manifest.entries) rows.push_back(record_to_fields(e));
  io::write_csv(path, rows);
}

ImagePair load_image_pair(const ManifestEntry& entry, const std::string& base_dir) {
  ImagePair pair;
  pair.participant_id = entry.participant_id;
  pair.visual = io::read_png_rgb((fs::path(base_dir) / entry.visual_path).string());
  pair.thermal = io::read_thermal((fs::path(base_dir) / entry.thermal_path).string());
  if (pair.visual.height != pair.thermal.height ||
      pair.visual.width != pair.thermal.width) {
    throw DimensionMismatch(
        "pair " + entry.participant_id + ": visual " +
        std::to_string(pair.visual.height) + "x" + std::to_string(pair.visual.width) +
        " vs thermal " + std::to_string(pair.thermal.height) + "x" +
        std::to_string(pair.thermal.width));
  }
  for (float v : pair.thermal.values) {
    if (!std::isfinite(v))
      throw NonFiniteTemperature("pair " + entry.participant_id +
                                 ": thermal grid contains a non-finite value");
    if (v < pair.thermal.valid_lo || v > pair.thermal.valid_hi)
      throw NonFiniteTemperature("pair " + entry.participant_id +
                                 ": temperature " + std::to_string(v) +
                                 " outside valid range");
  }
  return pair;
}

std::vector<float> normalize_thermal(const ThermalGrid& grid, NormWindow window) {
  if (!(window.lo < window.hi))
    throw DegenerateWindow("normalization window requires lo < hi, got [" +
                           std::to_string(window.lo) + ", " +
                           std::to_string(window.hi) + "]");
  std::vector<float> out(grid.values.size());
  const double span = window.hi - window.lo;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = (grid.values[i] - window.lo) / span;
    out[i] = static_cast<float>(u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u));
  }
  return out;
}

std::vector<std::string> validate_record(const ParticipantRecord& r) {
  std::vector<std::string> v;
  if (r.participant_id.empty()) v.push_back("participant_id: must be non-empty");
  if (r.mtcns && (*r.mtcns < 0 || *r.mtcns > 33))
    v.push_back("mtcns: out of range [0,33]");
  if (r.tbi && *r.tbi < 0) v.push_back("tbi: negative");
  if (r.age && (*r.age < 0 || *r.age > 130)) v.push_back("age: out of range [0,130]");
  if (r.diabetes_duration && *r.diabetes_duration < 0)
    v.push_back("diabetes_duration: negative");
  return v;
}

}  // namespace thermo::ingest
