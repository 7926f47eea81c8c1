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

#include "thermofoot/pipeline/stages.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <nlohmann/json.hpp>

#include "thermofoot/assoc/table_one.hpp"
#include "thermofoot/clinical/risk.hpp"
#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/errors.hpp"
#include "thermofoot/ingest/ingest.hpp"
#include "thermofoot/io/csv.hpp"
#include "thermofoot/io/image_io.hpp"
#include "thermofoot/nn/serialize.hpp"
#include "thermofoot/plot/plots.hpp"
#include "thermofoot/predict/predictor.hpp"
#include "thermofoot/repr/convae.hpp"
#include "thermofoot/rng.hpp"
#include "thermofoot/seg/metrics.hpp"
#include "thermofoot/seg/staple.hpp"
#include "thermofoot/seg/unet.hpp"
#include "thermofoot/synth/generator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace thermo::pipeline {
namespace {

constexpr const char* kVersion = "0.1.0";

// Stable string hash (FNV-1a) for deriving per-task seeds.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_path(const PipelineConfig& cfg) {
  if (!cfg.manifest.empty()) return cfg.manifest;
  return (fs::path(cfg.out_dir) / "synth" / "manifest.csv").string();
}

std::string stage_dir(const PipelineConfig& cfg, const char* stage) {
  return (fs::path(cfg.out_dir) / stage).string();
}

void require_artifact(const std::string& path, const std::string& what) {
  if (!fs::exists(path))
    throw MissingPrerequisite(what + " (expected at " + path + ")");
}

void write_provenance(const PipelineConfig& cfg, const char* stage,
                      std::vector<std::string> inputs) {
  json j;
  j["stage"] = stage;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.seed;
  j["inputs"] = inputs;
  j["version"] = kVersion;
  std::ofstream out(fs::path(stage_dir(cfg, stage)) / "provenance.json",
                    std::ios::binary);
  out << j.dump(2) << '\n';
}

std::string pred_mask_path(const PipelineConfig& cfg, const std::string& id) {
  return (fs::path(stage_dir(cfg, "segment")) / "masks" / (id + "_pred.png"))
      .string();
}

clinical::CoefficientTable coefficients_for(const PipelineConfig& cfg) {
  if (cfg.coefficients.empty()) return clinical::CoefficientTable::defaults();
  return clinical::CoefficientTable::load(cfg.coefficients);
}

SegmentedThermal load_segmented(const PipelineConfig& cfg,
                                const ManifestEntry& entry,
                                const std::string& base_dir) {
  ImagePair pair = ingest::load_image_pair(entry, base_dir);
  BinaryMask mask = io::read_mask_png(pred_mask_path(cfg, entry.participant_id));
  return seg::mask_thermal(pair.thermal, mask);
}

struct LatentData {
  std::vector<std::string> ids;
  cluster::FeatureMatrix features;  // n x 25088
};

LatentData load_latents(const PipelineConfig& cfg) {
  const std::string dir = stage_dir(cfg, "represent");
  const std::string data_path = (fs::path(dir) / "latents.f32").string();
  require_artifact(data_path, "latents missing");
  auto [data, shape] = io::read_float_matrix(data_path);
  const auto rows = shape.first, cols = shape.second;
  const auto index = io::read_csv((fs::path(dir) / "latents_index.csv").string());
  LatentData out;
  for (std::size_t i = 1; i < index.size(); ++i)
    out.ids.push_back(index[i][1]);
  if (out.ids.size() != rows)
    throw SchemaMismatch("latent index rows do not match matrix rows");
  out.features.resize(static_cast<Eigen::Index>(rows),
                      static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          data[r * cols + c];
  return out;
}

std::vector<int> load_assignments(const PipelineConfig& cfg,
                                  const std::vector<std::string>& ids) {
  const std::string path =
      (fs::path(stage_dir(cfg, "cluster")) / "assignments.csv").string();
  require_artifact(path, "cluster assignments missing");
  const auto rows = io::read_csv(path);
  std::map<std::string, int> by_id;
  for (std::size_t i = 1; i < rows.size(); ++i)
    by_id[rows[i][0]] = std::stoi(rows[i][1]);
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end())
      throw MissingPrerequisite("no cluster assignment for participant " + id);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

void run_synth(const PipelineConfig& cfg) {
  const std::string dir = stage_dir(cfg, "synth");
  fs::create_directories(dir);
  synth::generate_cohort(cfg.synth, dir);
  write_provenance(cfg, "synth", {});
  std::cout << "[synth] cohort of " << cfg.synth.n_participants << " at " << dir
            << "\n";
}

void run_segment(const PipelineConfig& cfg) {
  const std::string mpath = manifest_path(cfg);
  require_artifact(mpath, "manifest missing");
  Manifest manifest = ingest::load_manifest(mpath);
  if (manifest.entries.empty()) throw EmptyDataset("manifest has no rows");

  const std::string dir = stage_dir(cfg, "segment");
  fs::create_directories(fs::path(dir) / "masks");
  fs::create_directories(fs::path(dir) / "models");
  fs::create_directories(fs::path(dir) / "staple");

  // Ground-truth set: the first n_truth pairs, rater-simulated and fused
  // with STAPLE into consensus training masks.
  const int n_truth = std::min<int>(cfg.segmentation.n_truth,
                                    static_cast<int>(manifest.entries.size()));
  std::vector<ImagePair> train_pairs;
  std::vector<BinaryMask> train_masks;
  json staple_log = json::array();
  for (int i = 0; i < n_truth; ++i) {
    const auto& entry = manifest.entries[static_cast<std::size_t>(i)];
    ImagePair pair = ingest::load_image_pair(entry, manifest.base_dir);
    const std::string truth_path =
        (fs::path(manifest.base_dir) / synth::mask_path_for(entry.visual_path))
            .string();
    require_artifact(truth_path, "ground-truth mask missing for rater simulation");
    const BinaryMask truth = io::read_mask_png(truth_path);
    const auto raters = synth::simulate_raters(
        truth, cfg.segmentation.n_raters,
        Rng::derive(cfg.seed, 0x4257u + static_cast<std::uint64_t>(i)),
        cfg.segmentation.rater_boundary_sd);
    auto staple = seg::staple_consensus(raters, std::nullopt,
                                        cfg.segmentation.staple_tol,
                                        cfg.segmentation.staple_max_iter);
    json perf = json::array();
    for (const auto& rp : staple.raters)
      perf.push_back({{"p", rp.p}, {"q", rp.q}});
    staple_log.push_back({{"participant_id", entry.participant_id},
                          {"iterations", staple.iterations},
                          {"converged", staple.converged},
                          {"raters", perf},
                          {"consensus_vs_truth_iou",
                           seg::iou(staple.consensus, truth)}});
    train_pairs.push_back(std::move(pair));
    train_masks.push_back(std::move(staple.consensus));
  }
  {
    std::ofstream out(fs::path(dir) / "staple" / "performance.json",
                      std::ios::binary);
    out << staple_log.dump(2) << '\n';
  }

  seg::SegmenterConfig scfg;
  scfg.input_size = cfg.segmentation.input_size;
  scfg.base_channels = cfg.segmentation.base_channels;
  scfg.depth = cfg.segmentation.depth;
  scfg.train.max_epochs = cfg.segmentation.epochs;
  scfg.train.patience = cfg.segmentation.patience;
  scfg.train.lr = cfg.segmentation.lr;
  scfg.train.batch_size = cfg.segmentation.batch_size;
  scfg.train.val_fraction = cfg.segmentation.val_fraction;
  scfg.train.seed = cfg.seed;
  nn::FitResult log;
  seg::Segmenter segmenter = seg::train_segmenter(train_pairs, train_masks, scfg, &log);
  segmenter.save((fs::path(dir) / "models" / "unet.ckpt").string());
  nn::save_fit_log((fs::path(dir) / "training_log.json").string(), log, "val_iou");

  // Predict masks for every cohort image; score against ground truth when
  // truth masks exist.
  double iou_sum = 0.0;
  int iou_count = 0;
  for (const auto& entry : manifest.entries) {
    ImagePair pair = ingest::load_image_pair(entry, manifest.base_dir);
    BinaryMask pred = segmenter.predict(pair.visual);
    io::write_mask_png(pred_mask_path(cfg, entry.participant_id), pred);
    const std::string truth_path =
        (fs::path(manifest.base_dir) / synth::mask_path_for(entry.visual_path))
            .string();
    if (fs::exists(truth_path)) {
      iou_sum += seg::iou(pred, io::read_mask_png(truth_path));
      ++iou_count;
    }
  }
  json metrics;
  metrics["val_iou_best"] = log.best_metric;
  metrics["epochs_run"] = log.epochs_run;
  if (iou_count > 0) metrics["mean_iou_vs_truth"] = iou_sum / iou_count;
  {
    std::ofstream out(fs::path(dir) / "metrics.json", std::ios::binary);
    out << metrics.dump(2) << '\n';
  }
  write_provenance(cfg, "segment", {mpath});
  std::cout << "[segment] val IoU " << log.best_metric << " over "
            << log.epochs_run << " epochs\n";
}

void run_represent(const PipelineConfig& cfg) {
  const std::string mpath = manifest_path(cfg);
  require_artifact(mpath, "manifest missing");
  Manifest manifest = ingest::load_manifest(mpath);
  const std::string dir = stage_dir(cfg, "represent");
  fs::create_directories(fs::path(dir) / "models");

  const ingest::NormWindow window{cfg.convae.window_lo, cfg.convae.window_hi};
  std::vector<nn::Tensor> inputs;
  std::vector<std::string> ids;
  for (const auto& entry : manifest.entries) {
    require_artifact(pred_mask_path(cfg, entry.participant_id),
                     "predicted masks missing (run segment first)");
    inputs.push_back(
        repr::prepare_input(load_segmented(cfg, entry, manifest.base_dir), window));
    ids.push_back(entry.participant_id);
  }

  repr::ConvAEConfig acfg;
  acfg.train.max_epochs = cfg.convae.epochs;
  acfg.train.patience = cfg.convae.patience;
  acfg.train.lr = cfg.convae.lr;
  acfg.train.batch_size = cfg.convae.batch_size;
  acfg.train.val_fraction = cfg.convae.val_fraction;
  acfg.train.seed = cfg.seed;
  repr::ConvAE model(acfg);
  nn::FitResult log = model.fit(inputs);
  model.save((fs::path(dir) / "models" / "convae.ckpt").string());
  nn::save_fit_log((fs::path(dir) / "training_log.json").string(), log, "val_mse");

  // Hold-out reconstruction metrics on the validation split.
  auto [train_idx, val_idx] = nn::train_val_split(
      static_cast<int>(inputs.size()), cfg.convae.val_fraction, cfg.seed);
  double mse = 0.0, mae = 0.0;
  for (int i : val_idx) {
    auto [m1, m2] = model.reconstruct_error(inputs[static_cast<std::size_t>(i)]);
    mse += m1;
    mae += m2;
  }
  json metrics;
  metrics["holdout_mse"] = mse / static_cast<double>(val_idx.size());
  metrics["holdout_mae"] = mae / static_cast<double>(val_idx.size());
  metrics["latent_shape"] = {repr::kLatentChannels, repr::kLatentSide,
                             repr::kLatentSide};
  {
    std::ofstream out(fs::path(dir) / "recon_metrics.json", std::ios::binary);
    out << metrics.dump(2) << '\n';
  }

  // Export flattened latents: one float32 row per participant plus id index.
  std::vector<float> matrix;
  matrix.reserve(inputs.size() * repr::kLatentLength);
  for (const auto& x : inputs) {
    const auto v = repr::flatten_latent(model.encode(x));
    matrix.insert(matrix.end(), v.begin(), v.end());
  }
  io::write_float_matrix((fs::path(dir) / "latents.f32").string(), matrix.data(),
                         inputs.size(), repr::kLatentLength);
  std::vector<std::vector<std::string>> index;
  index.push_back({"row", "participant_id"});
  for (std::size_t i = 0; i < ids.size(); ++i)
    index.push_back({std::to_string(i), ids[i]});
  io::write_csv((fs::path(dir) / "latents_index.csv").string(), index);

  write_provenance(cfg, "represent", {mpath, stage_dir(cfg, "segment")});
  std::cout << "[represent] holdout MSE "
            << metrics["holdout_mse"].get<double>() << ", MAE "
            << metrics["holdout_mae"].get<double>() << "\n";
}

void run_cluster(const PipelineConfig& cfg) {
  LatentData latents = load_latents(cfg);
  const std::string dir = stage_dir(cfg, "cluster");
  fs::create_directories(dir);

  cluster::FeatureMatrix feats = latents.features;
  if (cfg.clustering.standardize) {
    for (Eigen::Index c = 0; c < feats.cols(); ++c) {
      const double m = feats.col(c).mean();
      double sd = std::sqrt((feats.col(c).array() - m).square().sum() /
                            std::max<Eigen::Index>(1, feats.rows() - 1));
      if (sd < 1e-12) sd = 1.0;
      feats.col(c) = (feats.col(c).array() - m) / sd;
    }
  }

  const cluster::LinkageTree tree = cluster::ward_linkage(feats);
  const int n = tree.n_leaves;
  const int k_max = std::min(cfg.clustering.k_max, n);
  const auto curve = cluster::explained_variance_curve(feats, tree, k_max);
  const int k = cluster::select_k_elbow(curve);
  const auto labels = cluster::cut_tree(tree, k);
  const double silhouette = cluster::silhouette_score(feats, labels);

  // linkage.csv: scipy-style merge list.
  std::vector<std::vector<std::string>> linkage_rows;
  linkage_rows.push_back({"node_a", "node_b", "height", "size"});
  for (const auto& m : tree.merges) {
    char h[48];
    std::snprintf(h, sizeof h, "%.9g", m.height);
    linkage_rows.push_back({std::to_string(m.a), std::to_string(m.b), h,
                            std::to_string(m.size)});
  }
  io::write_csv((fs::path(dir) / "linkage.csv").string(), linkage_rows);

  std::vector<std::vector<std::string>> assign_rows;
  assign_rows.push_back({"participant_id", "cluster"});
  for (std::size_t i = 0; i < latents.ids.size(); ++i)
    assign_rows.push_back({latents.ids[i], std::to_string(labels[i])});
  io::write_csv((fs::path(dir) / "assignments.csv").string(), assign_rows);

  std::vector<std::vector<std::string>> elbow_rows;
  elbow_rows.push_back({"k", "explained_variance"});
  for (const auto& [kk, v] : curve) {
    char b[48];
    std::snprintf(b, sizeof b, "%.9g", v);
    elbow_rows.push_back({std::to_string(kk), b});
  }
  io::write_csv((fs::path(dir) / "elbow.csv").string(), elbow_rows);

  cluster::TsneConfig tcfg;
  tcfg.perplexity = cfg.clustering.tsne_perplexity;
  if (n <= 3 * tcfg.perplexity)
    tcfg.perplexity = std::max(2.0, (n - 1) / 3.5);  // desk-scale fallback
  tcfg.iterations = cfg.clustering.tsne_iterations;
  tcfg.seed = cfg.seed;
  const Eigen::MatrixX2d embedding = cluster::tsne_embed(feats, tcfg);
  std::vector<std::vector<std::string>> tsne_rows;
  tsne_rows.push_back({"participant_id", "x", "y", "cluster"});
  for (std::size_t i = 0; i < latents.ids.size(); ++i) {
    char bx[48], by[48];
    std::snprintf(bx, sizeof bx, "%.9g", embedding(static_cast<Eigen::Index>(i), 0));
    std::snprintf(by, sizeof by, "%.9g", embedding(static_cast<Eigen::Index>(i), 1));
    tsne_rows.push_back({latents.ids[i], bx, by, std::to_string(labels[i])});
  }
  io::write_csv((fs::path(dir) / "tsne.csv").string(), tsne_rows);

  json summary;
  summary["k"] = k;
  summary["silhouette"] = silhouette;
  summary["n"] = n;
  {
    std::ofstream out(fs::path(dir) / "cluster_summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';
  }

  // Plots.
  plot::write_dendrogram_svg((fs::path(dir) / "dendrogram.svg").string(), tree);
  plot::write_elbow_svg((fs::path(dir) / "elbow.svg").string(), curve, k);
  plot::write_scatter_svg((fs::path(dir) / "tsne.svg").string(), embedding, labels);

  const auto exemplars =
      cluster::cluster_exemplars(feats, labels, cfg.clustering.exemplars_m);
  Manifest manifest = ingest::load_manifest(manifest_path(cfg));
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) by_id[e.participant_id] = &e;
  std::vector<SegmentedThermal> storage;
  storage.reserve(static_cast<std::size_t>(cfg.clustering.exemplars_m) *
                  exemplars.size());
  std::vector<std::vector<const SegmentedThermal*>> grid;
  for (const auto& members : exemplars) {
    std::vector<const SegmentedThermal*> row;
    for (int idx : members) {
      const auto* entry = by_id.at(latents.ids[static_cast<std::size_t>(idx)]);
      storage.push_back(load_segmented(cfg, *entry, manifest.base_dir));
      row.push_back(&storage.back());
    }
    grid.push_back(std::move(row));
  }
  plot::write_exemplar_grid_png((fs::path(dir) / "exemplars.png").string(), grid);

  write_provenance(cfg, "cluster", {stage_dir(cfg, "represent")});
  std::cout << "[cluster] k=" << k << " silhouette=" << silhouette << "\n";
}

void run_profile(const PipelineConfig& cfg) {
  const std::string mpath = manifest_path(cfg);
  require_artifact(mpath, "manifest missing");
  Manifest manifest = ingest::load_manifest(mpath);
  const std::string dir = stage_dir(cfg, "profile");
  fs::create_directories(dir);

  const auto coeffs = coefficients_for(cfg);
  coeffs.save((fs::path(dir) / "coefficients.txt").string());

  std::vector<clinical::RiskProfile> profiles;
  for (const auto& entry : manifest.entries) {
    require_artifact(pred_mask_path(cfg, entry.participant_id),
                     "predicted masks missing (run segment first)");
    SegmentedThermal segmented = load_segmented(cfg, entry, manifest.base_dir);
    profiles.push_back(clinical::derive_profile(entry.record, &segmented, coeffs));
  }
  clinical::write_risk_profiles_csv((fs::path(dir) / "risk_profiles.csv").string(),
                                    profiles);
  write_provenance(cfg, "profile", {mpath, stage_dir(cfg, "segment")});
  std::cout << "[profile] " << profiles.size() << " risk profiles\n";
}

void run_associate(const PipelineConfig& cfg) {
  const std::string mpath = manifest_path(cfg);
  require_artifact(mpath, "manifest missing");
  Manifest manifest = ingest::load_manifest(mpath, /*check_files=*/false);
  const std::string profile_path =
      (fs::path(stage_dir(cfg, "profile")) / "risk_profiles.csv").string();
  require_artifact(profile_path, "risk profiles missing (run profile first)");
  const auto profiles = clinical::read_risk_profiles_csv(profile_path);

  std::vector<std::string> ids;
  std::vector<ParticipantRecord> records;
  for (const auto& e : manifest.entries) {
    ids.push_back(e.participant_id);
    records.push_back(e.record);
  }
  if (profiles.size() != records.size())
    throw MissingPrerequisite("risk profiles do not cover the manifest");
  const auto assignments = load_assignments(cfg, ids);

  const auto report =
      assoc::table_one(records, profiles, assignments, assoc::default_schema());
  const std::string dir = stage_dir(cfg, "associate");
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "table_one.md", std::ios::binary);
    out << assoc::render_markdown(report);
  }
  {
    std::ofstream out(fs::path(dir) / "table_one.json", std::ios::binary);
    out << assoc::render_json(report);
  }
  write_provenance(cfg, "associate",
                   {mpath, profile_path, stage_dir(cfg, "cluster")});
  std::cout << "[associate] " << report.rows.size() << " variables, clusters "
            << report.n_cluster1 << "/" << report.n_cluster2 << "\n";
}

void run_predict(const PipelineConfig& cfg) {
  const std::string mpath = manifest_path(cfg);
  require_artifact(mpath, "manifest missing");
  Manifest manifest = ingest::load_manifest(mpath);
  const std::string profile_path =
      (fs::path(stage_dir(cfg, "profile")) / "risk_profiles.csv").string();
  require_artifact(profile_path, "risk profiles missing (run profile first)");
  const auto profiles = clinical::read_risk_profiles_csv(profile_path);

  std::vector<std::string> ids;
  for (const auto& e : manifest.entries) ids.push_back(e.participant_id);
  const auto assignments = load_assignments(cfg, ids);

  const std::string dir = stage_dir(cfg, "predict");
  fs::create_directories(fs::path(dir) / "models");

  // Thermal tensors are shared across tasks; the 6-channel variants are
  // rebuilt per task to bound memory.
  const ingest::NormWindow window{cfg.convae.window_lo, cfg.convae.window_hi};
  std::vector<nn::Tensor> thermal3;
  std::vector<ImagePair> pairs;
  thermal3.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    require_artifact(pred_mask_path(cfg, entry.participant_id),
                     "predicted masks missing (run segment first)");
    ImagePair pair = ingest::load_image_pair(entry, manifest.base_dir);
    BinaryMask mask = io::read_mask_png(pred_mask_path(cfg, entry.participant_id));
    thermal3.push_back(
        repr::prepare_input(seg::mask_thermal(pair.thermal, mask), window));
    pairs.push_back(std::move(pair));
  }

  auto visual_tensor = [&](const VisualImage& visual) {
    const int s = repr::kInputSide;
    nn::Tensor out({3, s, s});
    for (int ch = 0; ch < 3; ++ch) {
      imgproc::FloatPlane plane;
      plane.height = visual.height;
      plane.width = visual.width;
      plane.values.resize(static_cast<std::size_t>(visual.height) * visual.width);
      for (int r = 0; r < visual.height; ++r)
        for (int c = 0; c < visual.width; ++c)
          plane.at(r, c) = visual.at(r, c, ch) / 255.0f;
      plane = imgproc::pad_to_square(plane, 0.0f);
      plane = imgproc::resize_bilinear(plane, s, s);
      std::copy(plane.values.begin(), plane.values.end(),
                out.data.begin() + static_cast<std::size_t>(ch) * s * s);
    }
    return out;
  };

  json results = json::array();
  auto run_task = [&](const TaskConfig& task, const std::vector<double>& targets,
                      const std::vector<int>& usable) {
    const bool binary = task.kind == "binary";
    const bool six_ch = task.input == "thermal_plus_visual";

    std::vector<nn::Tensor> six;  // built only when needed
    std::vector<const nn::Tensor*> inputs(thermal3.size(), nullptr);
    if (six_ch) {
      six.reserve(usable.size());
      for (int i : usable) {
        nn::Tensor t({6, repr::kInputSide, repr::kInputSide});
        const nn::Tensor vis = visual_tensor(pairs[static_cast<std::size_t>(i)].visual);
        std::copy(thermal3[static_cast<std::size_t>(i)].data.begin(),
                  thermal3[static_cast<std::size_t>(i)].data.end(), t.data.begin());
        std::copy(vis.data.begin(), vis.data.end(),
                  t.data.begin() + thermal3[static_cast<std::size_t>(i)].size());
        six.push_back(std::move(t));
        inputs[static_cast<std::size_t>(i)] = &six.back();
      }
    } else {
      for (int i : usable)
        inputs[static_cast<std::size_t>(i)] = &thermal3[static_cast<std::size_t>(i)];
    }

    // Split over the usable subset, then map back to cohort indices.
    predict::SplitSpec split_spec;
    split_spec.train = cfg.prediction.train_fraction;
    split_spec.val = cfg.prediction.val_fraction;
    split_spec.test = cfg.prediction.test_fraction;
    split_spec.stratify = binary;
    split_spec.seed = Rng::derive(cfg.seed, fnv1a(task.name));
    std::vector<int> local_labels;
    if (binary)
      for (int i : usable)
        local_labels.push_back(targets[static_cast<std::size_t>(i)] != 0.0);
    predict::Split local = predict::split_dataset(
        static_cast<int>(usable.size()), split_spec, binary ? &local_labels : nullptr);
    auto remap = [&](std::vector<int>& part) {
      for (int& v : part) v = usable[static_cast<std::size_t>(v)];
    };
    remap(local.train);
    remap(local.val);
    remap(local.test);

    predict::PredictorConfig pcfg;
    pcfg.backbone = cfg.prediction.backbone;
    pcfg.pretrained_checkpoint = cfg.prediction.pretrained_checkpoint;
    pcfg.train.max_epochs = cfg.prediction.epochs;
    pcfg.train.patience = cfg.prediction.patience;
    pcfg.train.lr = cfg.prediction.lr;
    pcfg.train.batch_size = cfg.prediction.batch_size;
    pcfg.train.seed = split_spec.seed;
    predict::PredictorCnn model(six_ch ? 6 : 3,
                                binary ? predict::TaskKind::binary
                                       : predict::TaskKind::regression,
                                pcfg);
    nn::FitResult log = model.fit(inputs, targets, local);
    predict::EvalResult eval = model.evaluate(task.name, inputs, targets, local.test);
    model.save((fs::path(dir) / "models" / (task.name + ".ckpt")).string());

    json r;
    r["task"] = task.name;
    r["target"] = task.target;
    r["kind"] = task.kind;
    r["input"] = task.input;
    r["metric"] = eval.metric;
    r["value"] = eval.value;
    r["split_sizes"] = {static_cast<int>(local.train.size()),
                        static_cast<int>(local.val.size()),
                        static_cast<int>(local.test.size())};
    r["seed"] = split_spec.seed;
    r["config_hash"] = cfg.hash();
    r["epochs_run"] = log.epochs_run;
    results.push_back(std::move(r));
    std::cout << "[predict] " << task.name << " " << eval.metric << "="
              << eval.value << "\n";
  };

  for (const auto& task : cfg.prediction.tasks) {
    const assoc::Extractor get = assoc::extractor_for(task.target);
    std::vector<double> targets(manifest.entries.size(), 0.0);
    std::vector<int> usable;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      const auto v = get(manifest.entries[i].record, profiles[i]);
      if (!v) continue;
      targets[i] = *v;
      usable.push_back(static_cast<int>(i));
    }
    if (usable.size() < 10) {
      std::cout << "[predict] skipping " << task.name
                << ": fewer than 10 usable targets\n";
      continue;
    }
    run_task(task, targets, usable);
  }

  // Sensitivity analysis: predict the cluster label itself from thermal input.
  {
    TaskConfig task;
    task.name = "cluster_label_sensitivity";
    task.target = "cluster";
    task.kind = "binary";
    task.input = "thermal_only";
    std::vector<double> targets(assignments.size());
    std::vector<int> usable;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      targets[i] = assignments[i] == 1 ? 1.0 : 0.0;
      usable.push_back(static_cast<int>(i));
    }
    run_task(task, targets, usable);
  }

  {
    std::ofstream out(fs::path(dir) / "eval_results.json", std::ios::binary);
    out << results.dump(2) << '\n';
  }
  write_provenance(cfg, "predict",
                   {mpath, profile_path, stage_dir(cfg, "cluster")});
}

void run_all(const PipelineConfig& cfg) {
  if (cfg.manifest.empty()) run_synth(cfg);
  run_segment(cfg);
  run_represent(cfg);
  run_cluster(cfg);
  run_profile(cfg);
  run_associate(cfg);
  run_predict(cfg);
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {
      "synth", "segment", "represent", "cluster", "profile", "associate",
      "predict"};
  return names;
}

void run_stage(const std::string& name, const PipelineConfig& cfg) {
  if (name == "synth") return run_synth(cfg);
  if (name == "segment") return run_segment(cfg);
  if (name == "represent") return run_represent(cfg);
  if (name == "cluster") return run_cluster(cfg);
  if (name == "profile") return run_profile(cfg);
  if (name == "associate") return run_associate(cfg);
  if (name == "predict") return run_predict(cfg);
  throw ConfigError("unknown stage '" + name + "'");
}

}  // namespace thermo::pipeline
