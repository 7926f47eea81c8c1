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

#include "thermofoot/ingest/ingest.hpp"
#include "thermofoot/nn/layers.hpp"
#include "thermofoot/nn/train.hpp"
#include "thermofoot/types.hpp"

namespace thermo::repr {

/// Encoder output: 32 channels of 28x28 maps.
struct LatentRep {
  std::string participant_id;
  nn::Tensor values;  // shape (32,28,28)
};

constexpr int kLatentChannels = 32;
constexpr int kLatentSide = 28;
constexpr int kInputSide = 224;
constexpr int kLatentLength = kLatentChannels * kLatentSide * kLatentSide;  // 25088

/// Foot-segmented thermal -> (3,224,224) unit-interval tensor: normalize by
/// the window, zero the background, pad to square, resample bilinearly, and
/// replicate across the three channels. Throws EmptyRegion.
nn::Tensor prepare_input(const SegmentedThermal& segmented,
                         ingest::NormWindow window = {});

struct ConvAEConfig {
  nn::TrainConfig train{.max_epochs = 50, .patience = 10, .lr = 1.5e-3,
                        .batch_size = 8, .val_fraction = 0.15};
};

/// Three stride-2 convolutions down (3->16->32->32, 224->112->56->28) and a
/// mirrored transposed-convolution decoder ending in a sigmoid. The build
/// asserts the 224->112->56->28 shape trace and the 32x28x28 latent.
class ConvAE {
 public:
  explicit ConvAE(ConvAEConfig cfg = {});

  nn::FitResult fit(const std::vector<nn::Tensor>& inputs);

  LatentRep encode(const nn::Tensor& input);
  nn::Tensor reconstruct(const nn::Tensor& input);

  /// (MSE, MAE) of the reconstruction against the input itself.
  std::pair<double, double> reconstruct_error(const nn::Tensor& input);

  void save(const std::string& path);
  void load(const std::string& path);

 private:
  ConvAEConfig cfg_;
  nn::Sequential encoder_;
  nn::Sequential decoder_;
};

/// Channel-major flattening (c, then row, then column); exact inverse below.
std::vector<float> flatten_latent(const LatentRep& rep);
LatentRep unflatten_latent(const std::vector<float>& v,
                           const std::string& participant_id = {});

}  // namespace thermo::repr
