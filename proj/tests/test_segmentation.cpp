#include <doctest.h>

#include <cmath>

#include "thermofoot/errors.hpp"
#include "thermofoot/imgproc.hpp"
#include "thermofoot/rng.hpp"
#include "thermofoot/seg/metrics.hpp"
#include "thermofoot/seg/unet.hpp"
#include "thermofoot/synth/generator.hpp"

using namespace thermo;

namespace {

BinaryMask block_mask(int h, int w, int r0, int c0, int r1, int c1) {
  BinaryMask m;
  m.height = h;
  m.width = w;
  m.values.assign(static_cast<std::size_t>(h) * w, 0);
  for (int r = r0; r < r1; ++r)
    for (int c = c0; c < c1; ++c) m.at(r, c) = 1;
  return m;
}

}  // namespace

TEST_CASE("iou basics") {
  const BinaryMask a = block_mask(4, 4, 0, 0, 2, 2);
  SUBCASE("identical masks") { CHECK(seg::iou(a, a) == 1.0); }
  SUBCASE("disjoint masks") {
    const BinaryMask b = block_mask(4, 4, 2, 2, 4, 4);
    CHECK(seg::iou(a, b) == 0.0);
  }
  SUBCASE("shifted block: overlap 2, union 6") {
    const BinaryMask b = block_mask(4, 4, 0, 1, 2, 3);
    CHECK(seg::iou(a, b) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("empty-empty is 1 by convention") {
    const BinaryMask e1 = block_mask(4, 4, 0, 0, 0, 0);
    const BinaryMask e2 = block_mask(4, 4, 0, 0, 0, 0);
    CHECK(seg::iou(e1, e2) == 1.0);
  }
  SUBCASE("symmetry") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
      BinaryMask x = block_mask(6, 6, 0, 0, 0, 0), y = x;
      for (auto& v : x.values) v = rng.bernoulli(0.5);
      for (auto& v : y.values) v = rng.bernoulli(0.5);
      CHECK(seg::iou(x, y) == seg::iou(y, x));
    }
  }
  SUBCASE("dimension mismatch") {
    const BinaryMask b = block_mask(4, 5, 0, 0, 2, 2);
    CHECK_THROWS_AS(seg::iou(a, b), DimensionMismatch);
  }
}

TEST_CASE("mask_thermal keeps retained pixels bit-exact and flags background") {
  ThermalGrid g;
  g.height = 2;
  g.width = 3;
  g.values = {29.1f, 30.2f, 31.3f, 32.4f, 33.5f, 34.6f};

  SUBCASE("full mask is the identity") {
    const BinaryMask full = block_mask(2, 3, 0, 0, 2, 3);
    const auto segmented = seg::mask_thermal(g, full);
    CHECK(segmented.values == g.values);
  }
  SUBCASE("checkerboard keeps exactly half") {
    BinaryMask cb = block_mask(2, 3, 0, 0, 0, 0);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 3; ++c) cb.at(r, c) = (r + c) % 2;
    const auto segmented = seg::mask_thermal(g, cb);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < segmented.values.size(); ++i) {
      if (cb.values[i]) {
        CHECK(segmented.values[i] == g.values[i]);
        ++kept;
      } else {
        CHECK(std::isnan(segmented.values[i]));
      }
    }
    CHECK(kept == 3);
  }
  SUBCASE("empty mask leaves zero foot pixels") {
    const BinaryMask empty = block_mask(2, 3, 0, 0, 0, 0);
    const auto segmented = seg::mask_thermal(g, empty);
    CHECK(segmented.mask.count() == 0);
  }
  SUBCASE("dimension mismatch") {
    const BinaryMask wrong = block_mask(3, 3, 0, 0, 1, 1);
    CHECK_THROWS_AS(seg::mask_thermal(g, wrong), DimensionMismatch);
  }
}

TEST_CASE("pad/resize geometry restores mask dimensions") {
  const BinaryMask m = block_mask(120, 160, 30, 40, 90, 120);
  const BinaryMask padded = imgproc::pad_to_square(m);
  CHECK(padded.height == 160);
  CHECK(padded.width == 160);
  const BinaryMask small = imgproc::resize_nearest(padded, 224, 224);
  const BinaryMask restored = imgproc::restore_mask(small, 120, 160);
  CHECK(restored.height == 120);
  CHECK(restored.width == 160);
  CHECK(seg::iou(restored, m) > 0.95);  // nearest-neighbor round trip
}

TEST_CASE("segmenter memorizes a single pair (overfit sanity)") {
  synth::CohortSpec spec;
  spec.n_participants = 2;
  spec.image_height = spec.image_width = 96;
  spec.seed = 44;
  const auto g = synth::generate_participant(spec, 0, 2);

  seg::SegmenterConfig cfg;
  cfg.input_size = 96;
  cfg.base_channels = 8;
  cfg.depth = 3;
  cfg.train.max_epochs = 60;
  cfg.train.patience = 60;
  cfg.train.lr = 3e-3;
  cfg.train.batch_size = 1;
  cfg.train.seed = 1;
  seg::Segmenter model(cfg);
  model.fit({g.pair}, {g.truth_mask});
  const BinaryMask pred = model.predict(g.pair.visual);
  CHECK(seg::iou(pred, g.truth_mask) >= 0.99);
}

TEST_CASE("segmenter training is deterministic for a fixed seed") {
  synth::CohortSpec spec;
  spec.n_participants = 6;
  spec.image_height = spec.image_width = 64;
  spec.seed = 55;
  std::vector<ImagePair> pairs;
  std::vector<BinaryMask> masks;
  for (int i = 0; i < 6; ++i) {
    auto g = synth::generate_participant(spec, i, 2);
    pairs.push_back(std::move(g.pair));
    masks.push_back(std::move(g.truth_mask));
  }
  seg::SegmenterConfig cfg;
  cfg.input_size = 64;
  cfg.base_channels = 8;
  cfg.depth = 3;
  cfg.train.max_epochs = 4;
  cfg.train.batch_size = 2;
  cfg.train.seed = 9;
  nn::FitResult log_a, log_b;
  seg::train_segmenter(pairs, masks, cfg, &log_a);
  seg::train_segmenter(pairs, masks, cfg, &log_b);
  REQUIRE(log_a.log.size() == log_b.log.size());
  for (std::size_t i = 0; i < log_a.log.size(); ++i) {
    CHECK(log_a.log[i].train_loss == log_b.log[i].train_loss);
    CHECK(log_a.log[i].val_metric == log_b.log[i].val_metric);
  }
}

TEST_CASE("all-background image predicts an essentially empty mask") {
  synth::CohortSpec spec;
  spec.n_participants = 8;
  spec.image_height = spec.image_width = 64;
  spec.seed = 66;
  std::vector<ImagePair> pairs;
  std::vector<BinaryMask> masks;
  for (int i = 0; i < 8; ++i) {
    auto g = synth::generate_participant(spec, i, 2);
    pairs.push_back(std::move(g.pair));
    masks.push_back(std::move(g.truth_mask));
  }
  seg::SegmenterConfig cfg;
  cfg.input_size = 64;
  cfg.base_channels = 8;
  cfg.depth = 3;
  cfg.train.max_epochs = 12;
  cfg.train.batch_size = 2;
  cfg.train.seed = 4;
  seg::Segmenter model(cfg);
  model.fit(pairs, masks);

  VisualImage background;
  background.height = background.width = 64;
  background.pixels.assign(64 * 64 * 3, 0);
  Rng rng(2);
  for (std::size_t i = 0; i < background.pixels.size(); i += 3) {
    const auto v = static_cast<std::uint8_t>(45 + rng.uniform_int(-4, 4));
    background.pixels[i] = v;
    background.pixels[i + 1] = v;
    background.pixels[i + 2] = static_cast<std::uint8_t>(v + 5);
  }
  const BinaryMask pred = model.predict(background);
  const double fg_fraction =
      static_cast<double>(pred.count()) / static_cast<double>(pred.values.size());
  CHECK(fg_fraction < 0.01);
}

TEST_CASE("empty training set is rejected") {
  seg::SegmenterConfig cfg;
  cfg.input_size = 64;
  seg::Segmenter model(cfg);
  CHECK_THROWS_AS(model.fit({}, {}), EmptyDataset);
}
