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

#include <memory>
#include <string>
#include <vector>

#include "thermofoot/imgproc.hpp"
#include "thermofoot/nn/layers.hpp"
#include "thermofoot/nn/train.hpp"
#include "thermofoot/types.hpp"

namespace thermo::seg {

/// Encoder-decoder with skip connections. `depth` resolution levels with
/// `base` channels doubling per level; single conv per stage, 2x2 max
/// pooling down and stride-2 transposed conv up, channel-concat skips,
/// 1x1 head producing one logit plane.
class UNet {
 public:
  UNet(int in_channels, int base, int depth, std::uint64_t seed);

  nn::Tensor forward(const nn::Tensor& x);
  void backward(const nn::Tensor& dlogits);
  std::vector<nn::Param*> params();

  int depth() const { return depth_; }

 private:
  int depth_;
  std::vector<std::unique_ptr<nn::Conv2d>> enc_;
  std::vector<nn::ReLU> enc_relu_;
  std::vector<nn::MaxPool2d> pool_;
  std::unique_ptr<nn::Conv2d> bottleneck_;
  nn::ReLU bottleneck_relu_;
  std::vector<std::unique_ptr<nn::ConvTranspose2d>> up_;
  std::vector<std::unique_ptr<nn::Conv2d>> dec_;
  std::vector<nn::ReLU> dec_relu_;
  std::unique_ptr<nn::Conv2d> head_;
  std::vector<nn::Tensor> skips_;
};

struct SegmenterConfig {
  int input_size = 224;   // pad-to-square then resample to this
  int base_channels = 16;
  int depth = 4;
  double bce_weight = 1.0;
  double dice_weight = 1.0;
  nn::TrainConfig train{.max_epochs = 40, .patience = 10, .lr = 2e-3,
                        .batch_size = 4, .val_fraction = 0.2};
};

/// Trained foot segmenter operating on registered visual images.
class Segmenter {
 public:
  explicit Segmenter(SegmenterConfig cfg = {});

  /// Trains on (visual, mask) pairs with a deterministic validation split;
  /// early stopping on validation IoU. Throws EmptyDataset.
  nn::FitResult fit(const std::vector<ImagePair>& pairs,
                    const std::vector<BinaryMask>& masks);
  nn::FitResult fit_images(const std::vector<const VisualImage*>& images,
                           const std::vector<const BinaryMask*>& masks);

  /// Probability map at the training resolution.
  imgproc::FloatPlane predict_prob(const VisualImage& visual);

  /// Binary mask at the visual image's own resolution (threshold 0.5, mapped
  /// back through the pad/resample geometry).
  BinaryMask predict(const VisualImage& visual);

  void save(const std::string& path);
  void load(const std::string& path);

  const SegmenterConfig& config() const { return cfg_; }

 private:
  nn::Tensor prepare(const VisualImage& visual) const;
  nn::Tensor prepare_mask(const BinaryMask& mask) const;

  SegmenterConfig cfg_;
  std::unique_ptr<UNet> net_;
};

/// Spec-level convenience: builds and trains a Segmenter.
Segmenter train_segmenter(const std::vector<ImagePair>& pairs,
                          const std::vector<BinaryMask>& masks,
                          const SegmenterConfig& cfg, nn::FitResult* log = nullptr);

}  // namespace thermo::seg
