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

#include "thermofoot/assoc/table_one.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "thermofoot/errors.hpp"

namespace thermo::assoc {
namespace {

std::optional<double> from_bool(const std::optional<bool>& v) {
  if (!v) return std::nullopt;
  return *v ? 1.0 : 0.0;
}

std::optional<double> from_exam(const std::optional<ExamResult>& v) {
  if (!v) return std::nullopt;
  return *v == ExamResult::impaired ? 1.0 : 0.0;
}

double quantile(std::vector<double> v, double q) {
  // Linear interpolation between order statistics (the common "type 7" rule).
  std::sort(v.begin(), v.end());
  const double pos = q * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string summarize(const std::vector<double>& vals, Display display) {
  if (vals.empty()) return "-";
  switch (display) {
    case Display::mean_sd: {
      const double m = std::accumulate(vals.begin(), vals.end(), 0.0) /
                       static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - m) * (v - m);
      var = vals.size() > 1 ? var / (static_cast<double>(vals.size()) - 1.0) : 0.0;
      return fmt2(m) + " \xC2\xB1 " + fmt2(std::sqrt(var));  // mean ± sd
    }
    case Display::median_iqr: {
      const double med = quantile(vals, 0.5);
      const double q1 = quantile(vals, 0.25);
      const double q3 = quantile(vals, 0.75);
      return fmt2(med) + " (" + fmt2(q1) + " - " + fmt2(q3) + ")";
    }
    case Display::count_percent: {
      long long count = 0;
      for (double v : vals) count += v != 0.0;
      const double pct = 100.0 * static_cast<double>(count) /
                         static_cast<double>(vals.size());
      return std::to_string(count) + " (" + fmt2(pct) + ")";
    }
  }
  return "-";
}

}  // namespace

std::vector<VariableSchema> default_schema() {
  using K = VarKind;
  using D = Display;
  return {
      {"age", K::continuous_skewed, D::median_iqr, "Age (years)"},
      {"sex_male", K::categorical, D::count_percent, "Sex (Male)"},
      {"diabetes_duration", K::continuous_skewed, D::median_iqr,
       "Diabetes duration (years)"},
      {"light_touch_impaired", K::categorical, D::count_percent,
       "Light touch - Impaired"},
      {"position_impaired", K::categorical, D::count_percent,
       "Position sense - Impaired"},
      {"pinprick_impaired", K::categorical, D::count_percent,
       "Pinprick test - Impaired"},
      {"vibration_impaired", K::categorical, D::count_percent,
       "Vibration sense - Impaired"},
      {"temperature_impaired", K::categorical, D::count_percent,
       "Temperature sense - Impaired"},
      {"mtcns", K::continuous_skewed, D::median_iqr,
       "Modified Toronto Clinical Neuropathy Score (mTCNS)"},
      {"neuropathy_flag", K::categorical, D::count_percent,
       "Neuropathy (mTCNS >= 3)"},
      {"pad_clinical_history", K::categorical, D::count_percent,
       "Clinical history suggestive of PAD"},
      {"tbi", K::continuous_skewed, D::median_iqr, "Toe Brachial Index (TBI)"},
      {"pad_flag", K::categorical, D::count_percent, "PAD (TBI <= 0.71)"},
      {"n_complications", K::continuous_skewed, D::median_iqr,
       "Number of diabetes-related complications"},
      {"physical_impairment", K::categorical, D::count_percent,
       "Physical impairment"},
      {"visual_impairment", K::categorical, D::count_percent,
       "Visual impairment"},
      {"prior_ulcer", K::categorical, D::count_percent,
       "Previous history of foot ulcer"},
      {"prior_amputation", K::categorical, D::count_percent,
       "Previous history of amputations"},
      {"podus", K::continuous_skewed, D::median_iqr, "PODUS-2020 (0-4)"},
      {"podus_ge1", K::categorical, D::count_percent, "PODUS-2020, score >= 1"},
      {"sign_high_risk", K::categorical, D::count_percent,
       "SIGN indicative of high-risk foot"},
      {"martins_mendes", K::continuous_skewed, D::median_iqr,
       "Martins-Mendes (original)"},
      {"temp_min", K::continuous_normal, D::mean_sd,
       "Minimum foot temperature (C)"},
      {"temp_max", K::continuous_normal, D::mean_sd,
       "Maximum foot temperature (C)"},
      {"temp_range", K::continuous_normal, D::mean_sd,
       "Foot temperature range (C)"},
      {"temp_mean", K::continuous_normal, D::mean_sd,
       "Mean foot temperature (C)"},
  };
}

Extractor extractor_for(const std::string& name) {
  using R = const ParticipantRecord&;
  using P = const clinical::RiskProfile&;
  if (name == "age") return [](R r, P) { return r.age; };
  if (name == "sex_male")
    return [](R r, P) -> std::optional<double> {
      if (!r.sex) return std::nullopt;
      return *r.sex == Sex::male ? 1.0 : 0.0;
    };
  if (name == "diabetes_duration") return [](R r, P) { return r.diabetes_duration; };
  if (name == "mtcns")
    return [](R r, P) -> std::optional<double> {
      if (!r.mtcns) return std::nullopt;
      return static_cast<double>(*r.mtcns);
    };
  if (name == "tbi") return [](R r, P) { return r.tbi; };
  if (name == "pad_clinical_history")
    return [](R r, P) { return from_bool(r.pad_clinical_history); };
  if (name == "prior_ulcer") return [](R r, P) { return from_bool(r.prior_ulcer); };
  if (name == "prior_amputation")
    return [](R r, P) { return from_bool(r.prior_amputation); };
  if (name == "physical_impairment")
    return [](R r, P) { return from_bool(r.physical_impairment); };
  if (name == "visual_impairment")
    return [](R r, P) { return from_bool(r.visual_impairment); };
  if (name == "monofilament_insensitive")
    return [](R r, P) { return from_bool(r.monofilament_insensitive); };
  if (name == "light_touch_impaired")
    return [](R r, P) { return from_exam(r.light_touch); };
  if (name == "position_impaired")
    return [](R r, P) { return from_exam(r.position_sense); };
  if (name == "pinprick_impaired")
    return [](R r, P) { return from_exam(r.pinprick); };
  if (name == "vibration_impaired")
    return [](R r, P) { return from_exam(r.vibration_sense); };
  if (name == "temperature_impaired")
    return [](R r, P) { return from_exam(r.temperature_sense); };
  if (name == "neuropathy_flag")
    return [](R, P p) { return from_bool(p.neuropathy_flag); };
  if (name == "pad_flag") return [](R, P p) { return from_bool(p.pad_flag); };
  if (name == "podus")
    return [](R, P p) -> std::optional<double> {
      if (!p.podus) return std::nullopt;
      return static_cast<double>(*p.podus);
    };
  if (name == "podus_ge1") return [](R, P p) { return from_bool(p.podus_ge1); };
  if (name == "sign_high_risk")
    return [](R, P p) { return from_bool(p.sign_high_risk); };
  if (name == "martins_mendes") return [](R, P p) { return p.martins_mendes; };
  if (name == "n_complications")
    return [](R, P p) -> std::optional<double> {
      return static_cast<double>(p.n_complications);
    };
  if (name == "temp_min")
    return [](R, P p) -> std::optional<double> {
      if (!p.temps) return std::nullopt;
      return p.temps->min_c;
    };
  if (name == "temp_max")
    return [](R, P p) -> std::optional<double> {
      if (!p.temps) return std::nullopt;
      return p.temps->max_c;
    };
  if (name == "temp_range")
    return [](R, P p) -> std::optional<double> {
      if (!p.temps) return std::nullopt;
      return p.temps->range_c;
    };
  if (name == "temp_mean")
    return [](R, P p) -> std::optional<double> {
      if (!p.temps) return std::nullopt;
      return p.temps->mean_c;
    };
  throw UnknownField("no such report variable: " + name);
}

TableOneReport table_one(const std::vector<ParticipantRecord>& records,
                         const std::vector<clinical::RiskProfile>& profiles,
                         const std::vector<int>& assignments,
                         const std::vector<VariableSchema>& schema) {
  if (records.size() != profiles.size() || records.size() != assignments.size())
    throw ShapeMismatch("table_one: records/profiles/assignments sizes differ");

  TableOneReport report;
  for (int a : assignments) {
    if (a == 1) ++report.n_cluster1;
    else if (a == 2) ++report.n_cluster2;
    else throw ShapeMismatch("table_one: assignments must be 1 or 2");
  }

  for (const auto& var : schema) {
    const Extractor get = extractor_for(var.name);
    std::vector<double> g1, g2;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto v = get(records[i], profiles[i]);
      if (!v) continue;  // pairwise deletion
      (assignments[i] == 1 ? g1 : g2).push_back(*v);
    }
    AssociationResult row;
    row.schema = var;
    row.n_used_g1 = static_cast<int>(g1.size());
    row.n_used_g2 = static_cast<int>(g2.size());
    row.summary_g1 = summarize(g1, var.display);
    row.summary_g2 = summarize(g2, var.display);
    row.test = stat_test(g1, g2, var.kind);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_p(double p) {
  if (p < 0.01) {
    int exponent = static_cast<int>(std::floor(std::log10(p)));
    double mantissa = p / std::pow(10.0, exponent);
    if (mantissa >= 9.995) {  // rounding pushed the mantissa to 10
      mantissa /= 10.0;
      ++exponent;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f x 10^%d", mantissa, exponent);
    return buf;
  }
  return fmt2(p);
}

std::string render_markdown(const TableOneReport& report) {
  std::string out;
  out += "# Associations between thermography clusters and patient characteristics\n\n";
  out += "| Patient characteristics | Cluster 1 (N = " +
         std::to_string(report.n_cluster1) + ") | Cluster 2 (N = " +
         std::to_string(report.n_cluster2) + ") | p value |\n";
  out += "|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    out += "| " + row.schema.label + " | " + row.summary_g1 + " | " +
           row.summary_g2 + " | " + format_p(row.test.p_value) + " |\n";
  }
  return out;
}

std::string render_json(const TableOneReport& report) {
  nlohmann::json j;
  j["cluster_sizes"] = {report.n_cluster1, report.n_cluster2};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["name"] = row.schema.name;
    r["label"] = row.schema.label;
    r["kind"] = row.schema.kind == VarKind::continuous_normal ? "continuous_normal"
                : row.schema.kind == VarKind::continuous_skewed
                    ? "continuous_skewed"
                    : "categorical";
    r["summary"] = {row.summary_g1, row.summary_g2};
    r["n_used"] = {row.n_used_g1, row.n_used_g2};
    r["test"] = row.test.test_name;
    r["statistic"] = row.test.statistic;
    r["p_value"] = row.test.p_value;
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace thermo::assoc
