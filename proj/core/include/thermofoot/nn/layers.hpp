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

#include "thermofoot/nn/tensor.hpp"
#include "thermofoot/rng.hpp"

namespace thermo::nn {

/// Learnable parameter with its gradient accumulator.
struct Param {
  std::string name;
  std::vector<float> value;
  std::vector<float> grad;

  void resize(std::size_t n) {
    value.assign(n, 0.0f);
    grad.assign(n, 0.0f);
  }
};

/// Single-sample layer. forward() caches whatever backward() needs, so one
/// layer instance serves one forward/backward pair at a time.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x) = 0;
  virtual Tensor backward(const Tensor& dy) = 0;
  virtual void collect_params(std::vector<Param*>& out) {}
  virtual void init_weights(Rng& rng) {}
};

/// 2D convolution via im2col + GEMM. Input (Cin,H,W) -> (Cout,Ho,Wo) with
/// Ho = (H + 2*pad - k)/stride + 1.
class Conv2d : public Layer {
 public:
  Conv2d(int cin, int cout, int k, int stride, int pad, std::string name);
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(std::vector<Param*>& out) override;
  void init_weights(Rng& rng) override;

  Param weight;  // cout x (cin*k*k), row-major
  Param bias;    // cout

 private:
  int cin_, cout_, k_, stride_, pad_;
  int in_h_ = 0, in_w_ = 0, out_h_ = 0, out_w_ = 0;
  std::vector<float> col_;  // (cin*k*k) x (out_h*out_w), column-major
};

/// 2D transposed convolution (stride-s upsampling), the adjoint of Conv2d.
/// Input (Cin,H,W) -> (Cout,(H-1)*stride - 2*pad + k + out_pad, ...).
class ConvTranspose2d : public Layer {
 public:
  ConvTranspose2d(int cin, int cout, int k, int stride, int pad, int out_pad,
                  std::string name);
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(std::vector<Param*>& out) override;
  void init_weights(Rng& rng) override;

  Param weight;  // cin x (cout*k*k), row-major
  Param bias;    // cout

 private:
  int cin_, cout_, k_, stride_, pad_, out_pad_;
  int in_h_ = 0, in_w_ = 0, out_h_ = 0, out_w_ = 0;
  Tensor cached_x_;
};

class ReLU : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;

 private:
  std::vector<std::uint8_t> active_;
};

class Sigmoid : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;

 private:
  std::vector<float> out_;
};

/// 2x2 max pooling, stride 2. Ties resolve to the first (row-major) element.
class MaxPool2d : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;

 private:
  std::vector<int> argmax_;
  std::vector<int> in_shape_;
};

/// Per-channel spatial mean: (C,H,W) -> (C).
class GlobalAvgPool : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;

 private:
  std::vector<int> in_shape_;
};

class Linear : public Layer {
 public:
  Linear(int in, int out, std::string name);
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(std::vector<Param*>& out) override;
  void init_weights(Rng& rng) override;

  Param weight;  // out x in, row-major
  Param bias;    // out

 private:
  int in_, out_;
  std::vector<float> cached_x_;
};

/// Linear chain of layers.
class Sequential : public Layer {
 public:
  Sequential() = default;
  void add(std::unique_ptr<Layer> l) { layers_.push_back(std::move(l)); }
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(std::vector<Param*>& out) override;
  void init_weights(Rng& rng) override;
  std::size_t size() const { return layers_.size(); }
  Layer& at(std::size_t i) { return *layers_[i]; }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace thermo::nn
