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

#include "thermofoot/clinical/risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "thermofoot/errors.hpp"
#include "thermofoot/imgproc.hpp"
#include "thermofoot/io/csv.hpp"

namespace thermo::clinical {
namespace {

template <class T>
T require(const std::optional<T>& v, const char* field) {
  if (!v) throw MissingField(std::string("required field missing: ") + field);
  return *v;
}

std::string opt_bool_str(const std::optional<bool>& v) {
  return v ? (*v ? "1" : "0") : "";
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

CoefficientTable CoefficientTable::defaults() {
  // PODUS items carry unit weights. The Martins-Mendes values below are
  // structural placeholders with the published sign pattern; substitute the
  // published set via coefficients.txt for real analyses (see README).
  CoefficientTable t;
  t.values = {
      {"podus.monofilament_insensitive", 1.0},
      {"podus.pad", 1.0},
      {"podus.prior_ulcer", 1.0},
      {"podus.prior_amputation", 1.0},
      {"martins_mendes.intercept", -3.40},
      {"martins_mendes.neuropathy", 0.65},
      {"martins_mendes.pad", 0.85},
      {"martins_mendes.n_complications", 0.22},
      {"martins_mendes.physical_impairment", 0.40},
  };
  return t;
}

CoefficientTable CoefficientTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open coefficient file " + path);
  CoefficientTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!line.empty() && is_space(line.front())) line.erase(line.begin());
    while (!line.empty() && is_space(line.back())) line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaMismatch(path + ":" + std::to_string(lineno) +
                           ": expected name=value");
    std::string name = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!name.empty() && is_space(name.back())) name.pop_back();
    while (!value.empty() && is_space(value.front())) value.erase(value.begin());
    try {
      t.values[name] = std::stod(value);
    } catch (const std::exception&) {
      throw SchemaMismatch(path + ":" + std::to_string(lineno) +
                           ": bad numeric value '" + value + "'");
    }
  }
  return t;
}

void CoefficientTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (const auto& [name, value] : values) out << name << " = " << fmt(value) << '\n';
}

double CoefficientTable::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end())
    throw MissingCoefficients("coefficient not found: " + name);
  return it->second;
}

std::pair<std::optional<bool>, std::optional<bool>> derive_flags(
    const ParticipantRecord& r) {
  std::optional<bool> neuro, pad;
  if (r.mtcns) neuro = *r.mtcns >= kNeuropathyMtcnsThreshold;
  if (r.tbi) pad = *r.tbi <= kPadTbiThreshold;
  return {neuro, pad};
}

int podus_score(const ParticipantRecord& r, const CoefficientTable& coeffs) {
  const bool mono = require(r.monofilament_insensitive, "monofilament_insensitive");
  const auto [neuro, pad] = derive_flags(r);
  if (!pad) throw MissingField("required field missing: tbi (for PAD flag)");
  const bool ulcer = require(r.prior_ulcer, "prior_ulcer");
  const bool amput = require(r.prior_amputation, "prior_amputation");
  const double score =
      coeffs.at("podus.monofilament_insensitive") * (mono ? 1.0 : 0.0) +
      coeffs.at("podus.pad") * (*pad ? 1.0 : 0.0) +
      coeffs.at("podus.prior_ulcer") * (ulcer ? 1.0 : 0.0) +
      coeffs.at("podus.prior_amputation") * (amput ? 1.0 : 0.0);
  return static_cast<int>(std::llround(score));
}

bool sign_high_risk(const ParticipantRecord& r) {
  const bool ulcer = require(r.prior_ulcer, "prior_ulcer");
  const bool amput = require(r.prior_amputation, "prior_amputation");
  if (ulcer || amput) return true;
  const auto [neuro, pad] = derive_flags(r);
  if (!neuro) throw MissingField("required field missing: mtcns (for neuropathy flag)");
  if (!pad) throw MissingField("required field missing: tbi (for PAD flag)");
  const bool phys = require(r.physical_impairment, "physical_impairment");
  const bool vis = require(r.visual_impairment, "visual_impairment");
  const int hits = (*neuro ? 1 : 0) + (*pad ? 1 : 0) + (phys ? 1 : 0) + (vis ? 1 : 0);
  return hits >= 2;
}

double martins_mendes_score(const ParticipantRecord& r,
                            const CoefficientTable& coeffs) {
  const auto [neuro, pad] = derive_flags(r);
  if (!neuro) throw MissingField("required field missing: mtcns (for neuropathy flag)");
  if (!pad) throw MissingField("required field missing: tbi (for PAD flag)");
  const bool phys = require(r.physical_impairment, "physical_impairment");
  const int ncomp = count_complications(r);
  return coeffs.at("martins_mendes.intercept") +
         coeffs.at("martins_mendes.neuropathy") * (*neuro ? 1.0 : 0.0) +
         coeffs.at("martins_mendes.pad") * (*pad ? 1.0 : 0.0) +
         coeffs.at("martins_mendes.n_complications") * ncomp +
         coeffs.at("martins_mendes.physical_impairment") * (phys ? 1.0 : 0.0);
}

int count_complications(const ParticipantRecord& r) {
  if (!r.complications) return 0;
  return static_cast<int>(r.complications->size());
}

TempStats foot_temperature_stats(const SegmentedThermal& segmented) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < segmented.values.size(); ++i) {
    if (!segmented.mask.values[i]) continue;
    const double v = segmented.values[i];
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    sum += v;
    ++count;
  }
  if (count == 0)
    throw EmptyRegion("foot_temperature_stats: mask retains no pixels");
  return {mn, mx, mx - mn, sum / static_cast<double>(count)};
}

std::pair<TempStats, TempStats> per_foot_temperature_stats(
    const SegmentedThermal& segmented) {
  auto [labels, n_comp] = imgproc::connected_components(segmented.mask);
  if (n_comp == 0)
    throw EmptyRegion("per_foot_temperature_stats: mask retains no pixels");
  if (n_comp == 1) {
    const TempStats stats = foot_temperature_stats(segmented);
    return {stats, stats};
  }
  // Two largest components; left = smaller mean column.
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_comp) + 1, 0);
  std::vector<double> col_sum(static_cast<std::size_t>(n_comp) + 1, 0.0);
  for (int r = 0; r < segmented.height; ++r)
    for (int c = 0; c < segmented.width; ++c) {
      const int l = labels[static_cast<std::size_t>(r) * segmented.width + c];
      if (l) {
        ++sizes[l];
        col_sum[l] += c;
      }
    }
  int first = 1, second = 1;
  for (int l = 1; l <= n_comp; ++l)
    if (sizes[l] > sizes[first]) first = l;
  second = first == 1 ? 2 : 1;
  for (int l = 1; l <= n_comp; ++l)
    if (l != first && sizes[l] > sizes[second]) second = l;
  if (col_sum[first] / sizes[first] > col_sum[second] / sizes[second])
    std::swap(first, second);

  auto stats_for = [&](int target) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < segmented.values.size(); ++i) {
      if (labels[i] != target) continue;
      const double v = segmented.values[i];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      sum += v;
      ++count;
    }
    return TempStats{mn, mx, mx - mn, sum / static_cast<double>(count)};
  };
  return {stats_for(first), stats_for(second)};
}

RiskProfile derive_profile(const ParticipantRecord& record,
                           const SegmentedThermal* segmented,
                           const CoefficientTable& coeffs) {
  RiskProfile p;
  p.participant_id = record.participant_id;
  auto [neuro, pad] = derive_flags(record);
  p.neuropathy_flag = neuro;
  p.pad_flag = pad;
  p.n_complications = count_complications(record);
  try {
    p.podus = podus_score(record, coeffs);
    p.podus_ge1 = *p.podus >= 1;
  } catch (const MissingField&) {
  }
  try {
    p.sign_high_risk = sign_high_risk(record);
  } catch (const MissingField&) {
  }
  try {
    p.martins_mendes = martins_mendes_score(record, coeffs);
  } catch (const MissingField&) {
  }
  if (segmented) p.temps = foot_temperature_stats(*segmented);
  return p;
}

void write_risk_profiles_csv(const std::string& path,
                             const std::vector<RiskProfile>& profiles) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"participant_id", "neuropathy_flag", "pad_flag", "podus",
                  "podus_ge1", "sign_high_risk", "martins_mendes",
                  "n_complications", "temp_min", "temp_max", "temp_range",
                  "temp_mean"});
  for (const auto& p : profiles) {
    std::vector<std::string> row;
    row.push_back(p.participant_id);
    row.push_back(opt_bool_str(p.neuropathy_flag));
    row.push_back(opt_bool_str(p.pad_flag));
    row.push_back(p.podus ? std::to_string(*p.podus) : "");
    row.push_back(opt_bool_str(p.podus_ge1));
    row.push_back(opt_bool_str(p.sign_high_risk));
    row.push_back(p.martins_mendes ? fmt(*p.martins_mendes) : "");
    row.push_back(std::to_string(p.n_complications));
    if (p.temps) {
      row.push_back(fmt(p.temps->min_c));
      row.push_back(fmt(p.temps->max_c));
      row.push_back(fmt(p.temps->range_c));
      row.push_back(fmt(p.temps->mean_c));
    } else {
      row.insert(row.end(), {"", "", "", ""});
    }
    rows.push_back(std::move(row));
  }
  io::write_csv(path, rows);
}

std::vector<RiskProfile> read_risk_profiles_csv(const std::string& path) {
  const auto rows = io::read_csv(path);
  if (rows.empty()) throw SchemaMismatch("risk profile csv is empty: " + path);
  std::vector<RiskProfile> out;
  auto to_bool = [](const std::string& s) -> std::optional<bool> {
    if (s.empty()) return std::nullopt;
    return s == "1";
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 12)
      throw SchemaMismatch("risk profile row " + std::to_string(i + 1) +
                           " has " + std::to_string(r.size()) + " fields");
    RiskProfile p;
    p.participant_id = r[0];
    p.neuropathy_flag = to_bool(r[1]);
    p.pad_flag = to_bool(r[2]);
    if (!r[3].empty()) p.podus = std::stoi(r[3]);
    p.podus_ge1 = to_bool(r[4]);
    p.sign_high_risk = to_bool(r[5]);
    if (!r[6].empty()) p.martins_mendes = std::stod(r[6]);
    p.n_complications = std::stoi(r[7]);
    if (!r[8].empty())
      p.temps = TempStats{std::stod(r[8]), std::stod(r[9]), std::stod(r[10]),
                          std::stod(r[11])};
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace thermo::clinical
