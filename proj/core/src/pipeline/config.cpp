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

#include "thermofoot/pipeline/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "thermofoot/errors.hpp"
#include "thermofoot/util/sha256.hpp"

namespace thermo::pipeline {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

json synth_to_json(const synth::CohortSpec& s) {
  return json{{"n_participants", s.n_participants},
              {"cluster_fractions", s.cluster_fractions},
              {"separation", s.separation},
              {"risk_correlation", s.risk_correlation},
              {"image_height", s.image_height},
              {"image_width", s.image_width},
              {"hotspot_amplitude_c", s.hotspot_amplitude_c},
              {"hotspot_probability", s.hotspot_probability},
              {"base_shift_c", s.base_shift_c},
              {"range_shrink", s.range_shrink},
              {"missing_rate", s.missing_rate}};
}

synth::CohortSpec synth_from_json(const json& j, std::uint64_t seed) {
  check_keys(j, {"n_participants", "cluster_fractions", "separation",
                 "risk_correlation", "image_height", "image_width",
                 "hotspot_amplitude_c", "hotspot_probability", "base_shift_c",
                 "range_shrink", "missing_rate"},
             "synth");
  synth::CohortSpec s;
  s.seed = seed;
  get_if(j, "n_participants", s.n_participants);
  get_if(j, "cluster_fractions", s.cluster_fractions);
  get_if(j, "separation", s.separation);
  get_if(j, "risk_correlation", s.risk_correlation);
  get_if(j, "image_height", s.image_height);
  get_if(j, "image_width", s.image_width);
  get_if(j, "hotspot_amplitude_c", s.hotspot_amplitude_c);
  get_if(j, "hotspot_probability", s.hotspot_probability);
  get_if(j, "base_shift_c", s.base_shift_c);
  get_if(j, "range_shrink", s.range_shrink);
  get_if(j, "missing_rate", s.missing_rate);
  return s;
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"seed", "out_dir", "manifest", "coefficients", "synth",
                 "segmentation", "convae", "clustering", "prediction"},
             "config");
  PipelineConfig cfg;
  get_if(j, "seed", cfg.seed);
  get_if(j, "out_dir", cfg.out_dir);
  get_if(j, "manifest", cfg.manifest);
  get_if(j, "coefficients", cfg.coefficients);
  cfg.synth.seed = cfg.seed;
  if (j.contains("synth")) cfg.synth = synth_from_json(j.at("synth"), cfg.seed);

  if (j.contains("segmentation")) {
    const json& s = j.at("segmentation");
    check_keys(s, {"n_truth", "n_raters", "rater_boundary_sd", "input_size",
                   "base_channels", "depth", "epochs", "patience", "lr",
                   "batch_size", "val_fraction", "staple_tol", "staple_max_iter"},
               "segmentation");
    auto& c = cfg.segmentation;
    get_if(s, "n_truth", c.n_truth);
    get_if(s, "n_raters", c.n_raters);
    get_if(s, "rater_boundary_sd", c.rater_boundary_sd);
    get_if(s, "input_size", c.input_size);
    get_if(s, "base_channels", c.base_channels);
    get_if(s, "depth", c.depth);
    get_if(s, "epochs", c.epochs);
    get_if(s, "patience", c.patience);
    get_if(s, "lr", c.lr);
    get_if(s, "batch_size", c.batch_size);
    get_if(s, "val_fraction", c.val_fraction);
    get_if(s, "staple_tol", c.staple_tol);
    get_if(s, "staple_max_iter", c.staple_max_iter);
  }
  if (j.contains("convae")) {
    const json& s = j.at("convae");
    check_keys(s, {"epochs", "patience", "lr", "batch_size", "val_fraction",
                   "window_lo", "window_hi"},
               "convae");
    auto& c = cfg.convae;
    get_if(s, "epochs", c.epochs);
    get_if(s, "patience", c.patience);
    get_if(s, "lr", c.lr);
    get_if(s, "batch_size", c.batch_size);
    get_if(s, "val_fraction", c.val_fraction);
    get_if(s, "window_lo", c.window_lo);
    get_if(s, "window_hi", c.window_hi);
  }
  if (j.contains("clustering")) {
    const json& s = j.at("clustering");
    check_keys(s, {"k_max", "standardize", "tsne_perplexity", "tsne_iterations",
                   "exemplars_m"},
               "clustering");
    auto& c = cfg.clustering;
    get_if(s, "k_max", c.k_max);
    get_if(s, "standardize", c.standardize);
    get_if(s, "tsne_perplexity", c.tsne_perplexity);
    get_if(s, "tsne_iterations", c.tsne_iterations);
    get_if(s, "exemplars_m", c.exemplars_m);
  }
  if (j.contains("prediction")) {
    const json& s = j.at("prediction");
    check_keys(s, {"epochs", "patience", "lr", "batch_size", "train_fraction",
                   "val_fraction", "test_fraction", "backbone",
                   "pretrained_checkpoint", "tasks"},
               "prediction");
    auto& c = cfg.prediction;
    get_if(s, "epochs", c.epochs);
    get_if(s, "patience", c.patience);
    get_if(s, "lr", c.lr);
    get_if(s, "batch_size", c.batch_size);
    get_if(s, "train_fraction", c.train_fraction);
    get_if(s, "val_fraction", c.val_fraction);
    get_if(s, "test_fraction", c.test_fraction);
    get_if(s, "backbone", c.backbone);
    get_if(s, "pretrained_checkpoint", c.pretrained_checkpoint);
    if (s.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : s.at("tasks")) {
        check_keys(t, {"name", "target", "kind", "input"}, "prediction.tasks[]");
        TaskConfig tc;
        get_if(t, "name", tc.name);
        get_if(t, "target", tc.target);
        get_if(t, "kind", tc.kind);
        get_if(t, "input", tc.input);
        if (tc.name.empty() || tc.target.empty())
          throw ConfigError("prediction task needs name and target");
        if (tc.kind != "binary" && tc.kind != "regression")
          throw ConfigError("task kind must be binary or regression");
        if (tc.input != "thermal_only" && tc.input != "thermal_plus_visual")
          throw ConfigError("task input must be thermal_only or thermal_plus_visual");
        c.tasks.push_back(std::move(tc));
      }
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string PipelineConfig::to_json_text() const {
  json j;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["manifest"] = manifest;
  j["coefficients"] = coefficients;
  j["synth"] = synth_to_json(synth);
  j["segmentation"] = {{"n_truth", segmentation.n_truth},
                       {"n_raters", segmentation.n_raters},
                       {"rater_boundary_sd", segmentation.rater_boundary_sd},
                       {"input_size", segmentation.input_size},
                       {"base_channels", segmentation.base_channels},
                       {"depth", segmentation.depth},
                       {"epochs", segmentation.epochs},
                       {"patience", segmentation.patience},
                       {"lr", segmentation.lr},
                       {"batch_size", segmentation.batch_size},
                       {"val_fraction", segmentation.val_fraction},
                       {"staple_tol", segmentation.staple_tol},
                       {"staple_max_iter", segmentation.staple_max_iter}};
  j["convae"] = {{"epochs", convae.epochs},
                 {"patience", convae.patience},
                 {"lr", convae.lr},
                 {"batch_size", convae.batch_size},
                 {"val_fraction", convae.val_fraction},
                 {"window_lo", convae.window_lo},
                 {"window_hi", convae.window_hi}};
  j["clustering"] = {{"k_max", clustering.k_max},
                     {"standardize", clustering.standardize},
                     {"tsne_perplexity", clustering.tsne_perplexity},
                     {"tsne_iterations", clustering.tsne_iterations},
                     {"exemplars_m", clustering.exemplars_m}};
  json tasks = json::array();
  for (const auto& t : prediction.tasks)
    tasks.push_back({{"name", t.name},
                     {"target", t.target},
                     {"kind", t.kind},
                     {"input", t.input}});
  j["prediction"] = {{"epochs", prediction.epochs},
                     {"patience", prediction.patience},
                     {"lr", prediction.lr},
                     {"batch_size", prediction.batch_size},
                     {"train_fraction", prediction.train_fraction},
                     {"val_fraction", prediction.val_fraction},
                     {"test_fraction", prediction.test_fraction},
                     {"backbone", prediction.backbone},
                     {"pretrained_checkpoint", prediction.pretrained_checkpoint},
                     {"tasks", tasks}};
  return j.dump(2) + "\n";
}

void PipelineConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_json_text();
}

std::string PipelineConfig::hash() const {
  return util::sha256_hex(to_json_text());
}

}  // namespace thermo::pipeline
