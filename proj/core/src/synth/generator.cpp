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

#include "thermofoot/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "thermofoot/errors.hpp"
#include "thermofoot/ingest/ingest.hpp"
#include "thermofoot/io/csv.hpp"
#include "thermofoot/io/image_io.hpp"
#include "thermofoot/rng.hpp"

namespace fs = std::filesystem;

namespace thermo::synth {
namespace {

constexpr double kPi = 3.14159265358979323846;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Left-foot silhouette in pixel space: rotated super-ellipse plus five toe
// circles. The right foot is this function evaluated at the mirrored column,
// which makes the geometry mirror-exact by construction.
struct FootShape {
  double cx, cy;      // center, pixels
  double a, b;        // half-axes, pixels
  double cos_t, sin_t;

  // Foot-local coordinates: x across (medial positive), y along (toes negative).
  void local(double px, double py, double& xl, double& yl) const {
    const double dx = px - cx, dy = py - cy;
    xl = cos_t * dx + sin_t * dy;
    yl = -sin_t * dx + cos_t * dy;
  }

  bool inside(double px, double py, double* along_norm = nullptr) const {
    double xl, yl;
    local(px, py, xl, yl);
    if (along_norm) *along_norm = std::clamp(yl / b, -1.0, 1.0);
    // cheap reject before pow()
    if (xl * xl + yl * yl > (a + b) * (a + b)) return false;
    const double lvl =
        std::pow(std::abs(xl / a), 2.4) + std::pow(std::abs(yl / b), 2.4);
    if (lvl <= 1.0) return true;
    // toe bumps along the toe edge
    static constexpr double kToeX[5] = {0.58, 0.28, -0.02, -0.32, -0.60};
    static constexpr double kToeR[5] = {0.34, 0.28, 0.25, 0.22, 0.20};
    for (int i = 0; i < 5; ++i) {
      const double tx = kToeX[i] * a;
      const double ty = -(b * (0.98 - 0.10 * std::abs(kToeX[i])));
      const double rr = kToeR[i] * a;
      const double ddx = xl - tx, ddy = yl - ty;
      if (ddx * ddx + ddy * ddy <= rr * rr) return true;
    }
    return false;
  }
};

// 3-4 chamfer signed distance to the mask boundary, in pixels
// (negative inside). Coarse but plenty for rater-boundary simulation.
std::vector<double> signed_distance(const BinaryMask& m) {
  const int h = m.height, w = m.width;
  const double inf = 1e18;
  auto chamfer = [&](auto is_seed) {
    std::vector<double> d(static_cast<std::size_t>(h) * w, inf);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (is_seed(r, c)) d[static_cast<std::size_t>(r) * w + c] = 0.0;
    auto at = [&](int r, int c) -> double& {
      return d[static_cast<std::size_t>(r) * w + c];
    };
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        double v = at(r, c);
        if (r > 0) v = std::min(v, at(r - 1, c) + 3.0);
        if (c > 0) v = std::min(v, at(r, c - 1) + 3.0);
        if (r > 0 && c > 0) v = std::min(v, at(r - 1, c - 1) + 4.0);
        if (r > 0 && c + 1 < w) v = std::min(v, at(r - 1, c + 1) + 4.0);
        at(r, c) = v;
      }
    for (int r = h - 1; r >= 0; --r)
      for (int c = w - 1; c >= 0; --c) {
        double v = at(r, c);
        if (r + 1 < h) v = std::min(v, at(r + 1, c) + 3.0);
        if (c + 1 < w) v = std::min(v, at(r, c + 1) + 3.0);
        if (r + 1 < h && c + 1 < w) v = std::min(v, at(r + 1, c + 1) + 4.0);
        if (r + 1 < h && c > 0) v = std::min(v, at(r + 1, c - 1) + 4.0);
        at(r, c) = v;
      }
    return d;
  };
  auto d_to_fg = chamfer([&](int r, int c) { return m.at(r, c) != 0; });
  auto d_to_bg = chamfer([&](int r, int c) { return m.at(r, c) == 0; });
  std::vector<double> sdf(d_to_fg.size());
  for (std::size_t i = 0; i < sdf.size(); ++i)
    sdf[i] = (d_to_fg[i] - d_to_bg[i]) / 3.0;
  return sdf;
}

std::string participant_id(int index, int n) {
  int width = 4;
  for (int v = n; v >= 10000; v /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  return "P" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
         digits;
}

}  // namespace

void validate_spec(const CohortSpec& spec) {
  if (spec.n_participants < 2)
    throw ConfigError("cohort needs n_participants >= 2");
  if (spec.cluster_fractions.empty())
    throw ConfigError("cluster_fractions must be non-empty");
  double sum = 0.0;
  for (double f : spec.cluster_fractions) {
    if (f < 0.0) throw ConfigError("cluster fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("cluster fractions sum to " + std::to_string(sum) +
                      ", expected 1");
  if (spec.separation < 0.0) throw ConfigError("separation must be >= 0");
  if (spec.risk_correlation < 0.0 || spec.risk_correlation > 1.0)
    throw ConfigError("risk_correlation must lie in [0,1]");
  if (spec.image_height < 32 || spec.image_width < 32)
    throw ConfigError("image dimensions must be at least 32");
}

std::vector<int> planted_assignments(const CohortSpec& spec) {
  validate_spec(spec);
  const int n = spec.n_participants;
  const std::size_t k = spec.cluster_fractions.size();
  // Largest-remainder apportionment gives exact sizes for exact fractions.
  std::vector<int> sizes(k);
  std::vector<std::pair<double, std::size_t>> rem(k);
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double want = spec.cluster_fractions[i] * n;
    sizes[i] = static_cast<int>(std::floor(want));
    assigned += sizes[i];
    rem[i] = {-(want - sizes[i]), i};  // negated for ascending sort
  }
  std::sort(rem.begin(), rem.end());
  for (int extra = 0; extra < n - assigned; ++extra) ++sizes[rem[extra].second];

  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < k; ++i)
    labels.insert(labels.end(), sizes[i], static_cast<int>(i) + 1);
  Rng rng(Rng::derive(spec.seed, 0xA551u));
  rng.shuffle(labels);
  return labels;
}

std::pair<ImagePair, BinaryMask> generate_foot_pair(const FootPairParams& p,
                                                    std::uint64_t seed) {
  const int h = p.height, w = p.width;
  Rng rng(seed);

  // Fixed draw order keeps cohorts reproducible; draws happen whether or not
  // the corresponding feature is enabled.
  const double jx = rng.normal(0.0, 0.01);
  const double jy = rng.normal(0.0, 0.01);
  const double ja = rng.normal(0.0, 0.04);
  const double jb = rng.normal(0.0, 0.04);
  const bool hotspot_left = rng.bernoulli(0.5);
  const double hx_u = rng.uniform(-0.45, 0.45);
  const double hy_u = rng.uniform(-0.78, -0.40);

  FootShape foot;
  foot.cx = w * (0.300 + jx);
  foot.cy = h * (0.520 + jy);
  foot.a = w * 0.102 * p.foot_scale * (1.0 + ja);
  foot.b = h * 0.270 * p.foot_scale * (1.0 + jb);
  const double theta = -p.rotation_deg * kPi / 180.0;  // lean outward
  foot.cos_t = std::cos(theta);
  foot.sin_t = std::sin(theta);

  ImagePair pair;
  pair.visual.height = pair.thermal.height = h;
  pair.visual.width = pair.thermal.width = w;
  pair.visual.pixels.assign(static_cast<std::size_t>(h) * w * 3, 0);
  pair.thermal.values.assign(static_cast<std::size_t>(h) * w, 0.0f);
  BinaryMask mask;
  mask.height = h;
  mask.width = w;
  mask.values.assign(static_cast<std::size_t>(h) * w, 0);

  auto render_pixel = [&](double px, double py, double& temp, double& shade,
                          bool& inside) {
    double along = 0.0;
    inside = foot.inside(px, py, &along);
    if (inside) {
      temp = p.base_temp_c + 0.5 * p.gradient_c * along;  // heel warmer than toes
      double xl, yl;
      foot.local(px, py, xl, yl);
      shade = 1.0 - 0.15 * std::min(1.0, std::abs(xl / foot.a));
    } else {
      temp = p.ambient_temp_c;
      shade = 0.0;
    }
  };

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int cm = w - 1 - c;  // mirror column (exact)
      double t_l, s_l, t_r, s_r;
      bool in_l, in_r;
      render_pixel(c, r, t_l, s_l, in_l);
      render_pixel(cm, r, t_r, s_r, in_r);  // right foot = mirrored left
      const bool in = in_l || in_r;
      const double temp = in_l ? t_l : (in_r ? t_r : p.ambient_temp_c);
      const double shade = in_l ? s_l : s_r;
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      mask.values[idx] = in ? 1 : 0;
      pair.thermal.values[idx] = static_cast<float>(temp);
      if (in) {
        pair.visual.pixels[idx * 3 + 0] =
            static_cast<std::uint8_t>(std::clamp(205.0 * shade, 0.0, 255.0));
        pair.visual.pixels[idx * 3 + 1] =
            static_cast<std::uint8_t>(std::clamp(165.0 * shade, 0.0, 255.0));
        pair.visual.pixels[idx * 3 + 2] =
            static_cast<std::uint8_t>(std::clamp(135.0 * shade, 0.0, 255.0));
      } else {
        pair.visual.pixels[idx * 3 + 0] = 45;
        pair.visual.pixels[idx * 3 + 1] = 45;
        pair.visual.pixels[idx * 3 + 2] = 50;
      }
    }
  }

  // Hotspot: a Gaussian bump on one forefoot only, the planted contralateral
  // asymmetry. Center snaps to a pixel so the peak adds exactly the amplitude.
  if (p.hotspot_amplitude_c > 0.0) {
    double xl = hx_u * foot.a;
    double yl = hy_u * foot.b;
    const double dx = foot.cos_t * xl - foot.sin_t * yl;
    const double dy = foot.sin_t * xl + foot.cos_t * yl;
    int hcx = static_cast<int>(std::lround(foot.cx + dx));
    int hcy = static_cast<int>(std::lround(foot.cy + dy));
    if (!hotspot_left) hcx = w - 1 - hcx;
    hcx = std::clamp(hcx, 0, w - 1);
    hcy = std::clamp(hcy, 0, h - 1);
    const double sigma = 0.045 * std::min(h, w);
    const int reach = static_cast<int>(std::ceil(4.0 * sigma));
    for (int r = std::max(0, hcy - reach); r <= std::min(h - 1, hcy + reach); ++r) {
      for (int c = std::max(0, hcx - reach); c <= std::min(w - 1, hcx + reach); ++c) {
        const std::size_t idx = static_cast<std::size_t>(r) * w + c;
        if (!mask.values[idx]) continue;
        const double d2 = static_cast<double>(r - hcy) * (r - hcy) +
                          static_cast<double>(c - hcx) * (c - hcx);
        pair.thermal.values[idx] += static_cast<float>(
            p.hotspot_amplitude_c * std::exp(-d2 / (2.0 * sigma * sigma)));
      }
    }
  }

  // Noise last, row-major, one thermal + three visual draws per pixel.
  for (std::size_t idx = 0; idx < pair.thermal.values.size(); ++idx) {
    pair.thermal.values[idx] +=
        static_cast<float>(rng.normal() * p.noise_sd_c);
    for (int ch = 0; ch < 3; ++ch) {
      const double noisy =
          pair.visual.pixels[idx * 3 + ch] + rng.normal() * p.visual_noise_sd;
      pair.visual.pixels[idx * 3 + ch] =
          static_cast<std::uint8_t>(std::clamp(noisy, 0.0, 255.0));
    }
  }
  return {std::move(pair), std::move(mask)};
}

namespace {

// Clinical record, coupled to the planted cluster through logistic links
// with effect sizes calibrated to the cohort contrasts this model family
// is meant to emulate. risk_correlation scales every effect; 0 is an exact
// null. Records draw from their own seed stream, independent of image RNG.
ParticipantRecord sample_record(const CohortSpec& spec, int index,
                                int planted_cluster) {
  const std::uint64_t rec_seed =
      Rng::derive(spec.seed, 2 * static_cast<std::uint64_t>(index) + 1);
  const double z = planted_cluster == 1 ? 1.0 : 0.0;
  Rng r(rec_seed);
  const double c = spec.risk_correlation;
  ParticipantRecord rec;
  rec.participant_id = participant_id(index, spec.n_participants);
  rec.age = std::clamp(r.normal(56.31, 9.18), 25.0, 90.0);
  rec.sex = r.bernoulli(0.5142) ? Sex::male : Sex::female;
  rec.diabetes_duration =
      std::clamp(std::exp(r.normal(std::log(5.0) + 0.10 * c * z, 0.893)), 0.3, 45.0);
  const int mtcns = static_cast<int>(std::clamp(
      std::lround(std::exp(r.normal(std::log(3.0) + 0.66 * c * z, 0.75))), 0l, 33l));
  rec.mtcns = mtcns;
  const double tbi = std::clamp(r.normal(0.96 - 0.13 * c * z, 0.10), 0.30, 1.40);
  rec.tbi = tbi;
  rec.monofilament_insensitive = r.bernoulli(sigmoid(logit(0.54) + 0.95 * c * z));
  const bool pad_hist = r.bernoulli(sigmoid(logit(0.164) + 0.66 * c * z));
  rec.pad_clinical_history = pad_hist;
  rec.prior_ulcer = r.bernoulli(sigmoid(logit(0.0314) + 0.27 * c * z));
  rec.prior_amputation = r.bernoulli(0.004);
  rec.physical_impairment = r.bernoulli(sigmoid(logit(0.642) + 0.34 * c * z));
  rec.visual_impairment = r.bernoulli(0.55);
  auto exam = [&](double p0, double beta) {
    return r.bernoulli(sigmoid(logit(p0) + beta * c * z)) ? ExamResult::impaired
                                                          : ExamResult::normal;
  };
  rec.light_touch = exam(0.182, 0.50);
  rec.position_sense = exam(0.044, -0.63);
  rec.pinprick = exam(0.082, 1.05);
  rec.vibration_sense = exam(0.164, 0.49);
  rec.temperature_sense = exam(0.283, 0.0);
  std::set<std::string> comps;
  if (r.bernoulli(0.070)) comps.insert("stroke");
  if (r.bernoulli(0.024)) comps.insert("renal_disease");
  if (r.bernoulli(0.011)) comps.insert("eye_disease");
  if (mtcns >= 3) comps.insert("neuropathy");
  if (pad_hist) comps.insert("pad");
  rec.complications = std::move(comps);

  // Missingness draws always consume RNG so the stream layout is stable.
  const bool miss_mtcns = r.uniform() < spec.missing_rate;
  const bool miss_tbi = r.uniform() < spec.missing_rate;
  const bool miss_exam = r.uniform() < spec.missing_rate;
  if (miss_mtcns) rec.mtcns.reset();
  if (miss_tbi) rec.tbi.reset();
  if (miss_exam) {
    rec.pinprick.reset();
    rec.vibration_sense.reset();
    rec.light_touch.reset();
    rec.position_sense.reset();
    rec.temperature_sense.reset();
  }
  return rec;
}

}  // namespace

GeneratedParticipant generate_participant(const CohortSpec& spec, int index,
                                          int planted_cluster) {
  const std::uint64_t img_seed =
      Rng::derive(spec.seed, 2 * static_cast<std::uint64_t>(index));
  const double z = planted_cluster == 1 ? 1.0 : 0.0;
  const double sep = spec.separation;

  Rng prng(Rng::derive(img_seed, 0));
  FootPairParams params;
  params.height = spec.image_height;
  params.width = spec.image_width;
  params.base_temp_c = prng.normal(30.0 + z * sep * spec.base_shift_c, 0.55);
  params.gradient_c = std::max(0.8, prng.normal(3.8, 0.45)) *
                      (1.0 - z * std::min(1.0, sep) * spec.range_shrink);
  params.foot_scale = std::clamp(prng.normal(1.0, 0.03), 0.90, 1.10);
  params.rotation_deg = prng.normal(4.0, 1.5);
  const bool hotspot =
      prng.bernoulli(spec.hotspot_probability * std::min(1.0, sep)) && z > 0.5;
  const double amp = std::max(0.6, prng.normal(spec.hotspot_amplitude_c, 0.25));
  params.hotspot_amplitude_c = hotspot ? amp : 0.0;

  GeneratedParticipant g;
  g.planted_cluster = planted_cluster;
  g.hotspot_amplitude = params.hotspot_amplitude_c;
  auto [pair, mask] = generate_foot_pair(params, Rng::derive(img_seed, 1));
  g.pair = std::move(pair);
  g.truth_mask = std::move(mask);
  g.pair.participant_id = participant_id(index, spec.n_participants);
  g.record = sample_record(spec, index, planted_cluster);
  return g;
}

std::vector<ParticipantRecord> generate_records(const CohortSpec& spec,
                                                const std::vector<int>& clusters) {
  std::vector<ParticipantRecord> out;
  out.reserve(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i)
    out.push_back(sample_record(spec, static_cast<int>(i), clusters[i]));
  return out;
}

CohortPaths generate_cohort(const CohortSpec& spec, const std::string& out_dir,
                            PlantedTruth* truth_out) {
  validate_spec(spec);
  const auto labels = planted_assignments(spec);
  fs::create_directories(fs::path(out_dir) / "images");

  Manifest manifest;
  manifest.base_dir = out_dir;
  PlantedTruth truth;
  std::vector<std::vector<std::string>> truth_rows;
  truth_rows.push_back({"participant_id", "cluster", "hotspot_amplitude"});

  for (int i = 0; i < spec.n_participants; ++i) {
    GeneratedParticipant g = generate_participant(spec, i, labels[i]);
    const std::string& id = g.pair.participant_id;
    const std::string visual_rel = "images/" + id + "_visual.png";
    const std::string thermal_rel = "images/" + id + "_thermal.f32";
    io::write_png_rgb((fs::path(out_dir) / visual_rel).string(), g.pair.visual);
    io::write_thermal((fs::path(out_dir) / thermal_rel).string(), g.pair.thermal);
    io::write_mask_png((fs::path(out_dir) / mask_path_for(visual_rel)).string(),
                       g.truth_mask);

    ManifestEntry e;
    e.participant_id = id;
    e.visual_path = visual_rel;
    e.thermal_path = thermal_rel;
    e.record = g.record;
    manifest.entries.push_back(std::move(e));

    char amp[32];
    std::snprintf(amp, sizeof amp, "%.6g", g.hotspot_amplitude);
    truth_rows.push_back({id, std::to_string(g.planted_cluster), amp});
    truth.participant_ids.push_back(id);
    truth.clusters.push_back(g.planted_cluster);
    truth.hotspot_amplitudes.push_back(g.hotspot_amplitude);
  }

  CohortPaths paths;
  paths.manifest = (fs::path(out_dir) / "manifest.csv").string();
  paths.planted_truth = (fs::path(out_dir) / "planted_truth.csv").string();
  paths.images_dir = (fs::path(out_dir) / "images").string();
  ingest::save_manifest(manifest, paths.manifest);
  io::write_csv(paths.planted_truth, truth_rows);
  if (truth_out) *truth_out = std::move(truth);
  return paths;
}

std::vector<BinaryMask> simulate_raters(const BinaryMask& truth, int n_raters,
                                        std::uint64_t seed, double boundary_sd) {
  const auto sdf = signed_distance(truth);
  std::vector<BinaryMask> raters;
  raters.reserve(static_cast<std::size_t>(n_raters));
  for (int ri = 0; ri < n_raters; ++ri) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(ri)));
    const double bias = boundary_sd * (ri % 2 == 0 ? 0.8 : -0.8) *
                        (1.0 + 0.25 * rng.normal());
    // Smooth boundary wobble from a few random sinusoids.
    double fx[3], fy[3], ph[3], am[3];
    for (int j = 0; j < 3; ++j) {
      fx[j] = rng.uniform(0.5, 3.0);
      fy[j] = rng.uniform(0.5, 3.0);
      ph[j] = rng.uniform(0.0, 2.0 * kPi);
      am[j] = boundary_sd * 0.6 / (j + 1);
    }
    BinaryMask m;
    m.height = truth.height;
    m.width = truth.width;
    m.values.assign(truth.values.size(), 0);
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c) {
        double wobble = 0.0;
        for (int j = 0; j < 3; ++j) {
          wobble += am[j] * std::sin(2.0 * kPi * (fx[j] * c / m.width +
                                                  fy[j] * r / m.height) + ph[j]);
        }
        const std::size_t idx = static_cast<std::size_t>(r) * m.width + c;
        m.values[idx] = sdf[idx] < bias + wobble ? 1 : 0;
      }
    }
    raters.push_back(std::move(m));
  }
  return raters;
}

std::string mask_path_for(const std::string& visual_path) {
  const std::string suffix = "_visual.png";
  if (visual_path.size() > suffix.size() &&
      visual_path.compare(visual_path.size() - suffix.size(), suffix.size(),
                          suffix) == 0) {
    return visual_path.substr(0, visual_path.size() - suffix.size()) + "_mask.png";
  }
  return visual_path + ".mask.png";
}

}  // namespace thermo::synth
