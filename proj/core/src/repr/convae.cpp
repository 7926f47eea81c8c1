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

#include "thermofoot/repr/convae.hpp"

#include <cmath>

#include "thermofoot/errors.hpp"
#include "thermofoot/nn/losses.hpp"
#include "thermofoot/nn/serialize.hpp"

namespace thermo::repr {

ConvAE::ConvAE(ConvAEConfig cfg) : cfg_(cfg) {
  encoder_.add(std::make_unique<nn::Conv2d>(3, 16, 3, 2, 1, "enc0"));
  encoder_.add(std::make_unique<nn::ReLU>());
  encoder_.add(std::make_unique<nn::Conv2d>(16, 32, 3, 2, 1, "enc1"));
  encoder_.add(std::make_unique<nn::ReLU>());
  encoder_.add(std::make_unique<nn::Conv2d>(32, 32, 3, 2, 1, "enc2"));
  decoder_.add(std::make_unique<nn::ConvTranspose2d>(32, 32, 3, 2, 1, 1, "dec0"));
  decoder_.add(std::make_unique<nn::ReLU>());
  decoder_.add(std::make_unique<nn::ConvTranspose2d>(32, 16, 3, 2, 1, 1, "dec1"));
  decoder_.add(std::make_unique<nn::ReLU>());
  decoder_.add(std::make_unique<nn::ConvTranspose2d>(16, 3, 3, 2, 1, 1, "dec2"));
  decoder_.add(std::make_unique<nn::Sigmoid>());

  Rng rng(Rng::derive(cfg_.train.seed, 0xAEu));
  encoder_.init_weights(rng);
  decoder_.init_weights(rng);

  // Architecture trace: 224 -> 112 -> 56 -> 28 with 32 final channels, and
  // the decoder maps the latent back to 224x224x3.
  nn::Tensor probe({3, kInputSide, kInputSide});
  nn::Tensor latent = encoder_.forward(probe);
  if (latent.shape != std::vector<int>{kLatentChannels, kLatentSide, kLatentSide})
    throw ShapeMismatch("convae encoder trace produced " + latent.shape_str());
  nn::Tensor recon = decoder_.forward(latent);
  if (recon.shape != std::vector<int>{3, kInputSide, kInputSide})
    throw ShapeMismatch("convae decoder trace produced " + recon.shape_str());
}

nn::FitResult ConvAE::fit(const std::vector<nn::Tensor>& inputs) {
  if (inputs.size() < 2)
    throw EmptyDataset("convae needs at least 2 inputs, got " +
                       std::to_string(inputs.size()));
  for (const auto& x : inputs)
    if (x.shape != std::vector<int>{3, kInputSide, kInputSide})
      throw ShapeMismatch("convae input " + x.shape_str());

  const int n = static_cast<int>(inputs.size());
  auto [train_idx, val_idx] =
      nn::train_val_split(n, cfg_.train.val_fraction, cfg_.train.seed);

  auto train_sample = [&](int k) {
    const nn::Tensor& x = inputs[static_cast<std::size_t>(
        train_idx[static_cast<std::size_t>(k)])];
    nn::Tensor y = decoder_.forward(encoder_.forward(x));
    auto lg = nn::mse_loss(y, x);
    encoder_.backward(decoder_.backward(lg.grad));
    return lg.loss;
  };
  auto validate = [&]() {
    double mse = 0.0;
    for (int i : val_idx) {
      nn::Tensor y = decoder_.forward(encoder_.forward(inputs[i]));
      mse += nn::mse_loss(y, inputs[i]).loss;
    }
    return mse / static_cast<double>(val_idx.size());
  };

  std::vector<nn::Param*> params;
  encoder_.collect_params(params);
  decoder_.collect_params(params);
  return nn::fit(params, static_cast<int>(train_idx.size()), cfg_.train,
                 /*maximize_metric=*/false, train_sample, validate);
}

LatentRep ConvAE::encode(const nn::Tensor& input) {
  if (input.shape != std::vector<int>{3, kInputSide, kInputSide})
    throw ShapeMismatch("encode expects (3,224,224), got " + input.shape_str());
  LatentRep rep;
  rep.values = encoder_.forward(input);
  for (float v : rep.values.data)
    if (!std::isfinite(v)) throw NonFiniteFeature("latent has non-finite value");
  return rep;
}

nn::Tensor ConvAE::reconstruct(const nn::Tensor& input) {
  if (input.shape != std::vector<int>{3, kInputSide, kInputSide})
    throw ShapeMismatch("reconstruct expects (3,224,224), got " +
                        input.shape_str());
  return decoder_.forward(encoder_.forward(input));
}

std::pair<double, double> ConvAE::reconstruct_error(const nn::Tensor& input) {
  nn::Tensor y = reconstruct(input);
  const double mse = nn::mse_loss(y, input).loss;
  const double mae = nn::l1_error(y, input);
  return {mse, mae};
}

void ConvAE::save(const std::string& path) {
  std::vector<nn::Param*> params;
  encoder_.collect_params(params);
  decoder_.collect_params(params);
  nn::save_params(path, params);
}

void ConvAE::load(const std::string& path) {
  std::vector<nn::Param*> params;
  encoder_.collect_params(params);
  decoder_.collect_params(params);
  nn::load_params(path, params);
}

}  // namespace thermo::repr
