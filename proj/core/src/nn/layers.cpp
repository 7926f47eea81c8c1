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

#include "thermofoot/nn/layers.hpp"

#include <Eigen/Core>

#include <cmath>

#include "thermofoot/errors.hpp"

namespace thermo::nn {
namespace {

using MatRM = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatCM = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using MapRM = Eigen::Map<MatRM>;
using MapCM = Eigen::Map<MatCM>;
using CMapRM = Eigen::Map<const MatRM>;
using CMapCM = Eigen::Map<const MatCM>;

// Gathers conv receptive fields: col is (C*k*k) x (out_h*out_w), one column
// per output pixel, column-major (each column contiguous).
void im2col(const float* x, int c, int h, int w, int k, int stride, int pad,
            int out_h, int out_w, float* col) {
  const int kk = k * k;
  for (int oh = 0; oh < out_h; ++oh) {
    for (int ow = 0; ow < out_w; ++ow) {
      float* dst = col + (static_cast<std::size_t>(oh) * out_w + ow) *
                             static_cast<std::size_t>(c) * kk;
      const int ih0 = oh * stride - pad;
      const int iw0 = ow * stride - pad;
      for (int ci = 0; ci < c; ++ci) {
        const float* plane = x + static_cast<std::size_t>(ci) * h * w;
        for (int kh = 0; kh < k; ++kh) {
          const int ih = ih0 + kh;
          for (int kw = 0; kw < k; ++kw) {
            const int iw = iw0 + kw;
            *dst++ = (ih >= 0 && ih < h && iw >= 0 && iw < w)
                         ? plane[static_cast<std::size_t>(ih) * w + iw]
                         : 0.0f;
          }
        }
      }
    }
  }
}

// Scatter-adds columns back into the image: the adjoint of im2col.
void col2im(const float* col, int c, int h, int w, int k, int stride, int pad,
            int out_h, int out_w, float* x) {
  std::fill(x, x + static_cast<std::size_t>(c) * h * w, 0.0f);
  const int kk = k * k;
  for (int oh = 0; oh < out_h; ++oh) {
    for (int ow = 0; ow < out_w; ++ow) {
      const float* src = col + (static_cast<std::size_t>(oh) * out_w + ow) *
                                   static_cast<std::size_t>(c) * kk;
      const int ih0 = oh * stride - pad;
      const int iw0 = ow * stride - pad;
      for (int ci = 0; ci < c; ++ci) {
        float* plane = x + static_cast<std::size_t>(ci) * h * w;
        for (int kh = 0; kh < k; ++kh) {
          const int ih = ih0 + kh;
          for (int kw = 0; kw < k; ++kw) {
            const int iw = iw0 + kw;
            if (ih >= 0 && ih < h && iw >= 0 && iw < w)
              plane[static_cast<std::size_t>(ih) * w + iw] += *src;
            ++src;
          }
        }
      }
    }
  }
}

int conv_out(int in, int k, int stride, int pad) {
  return (in + 2 * pad - k) / stride + 1;
}

}  // namespace

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(int cin, int cout, int k, int stride, int pad, std::string name)
    : cin_(cin), cout_(cout), k_(k), stride_(stride), pad_(pad) {
  weight.name = name + ".weight";
  weight.resize(static_cast<std::size_t>(cout) * cin * k * k);
  bias.name = name + ".bias";
  bias.resize(static_cast<std::size_t>(cout));
}

void Conv2d::init_weights(Rng& rng) {
  // He initialization for ReLU stacks.
  const double fan_in = static_cast<double>(cin_) * k_ * k_;
  const double sd = std::sqrt(2.0 / fan_in);
  for (auto& v : weight.value) v = static_cast<float>(rng.normal(0.0, sd));
  for (auto& v : bias.value) v = 0.0f;
}

void Conv2d::collect_params(std::vector<Param*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.shape.size() != 3 || x.dim(0) != cin_)
    throw ShapeMismatch("conv2d input " + x.shape_str());
  in_h_ = x.dim(1);
  in_w_ = x.dim(2);
  out_h_ = conv_out(in_h_, k_, stride_, pad_);
  out_w_ = conv_out(in_w_, k_, stride_, pad_);
  const int kcols = cin_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(out_h_) * out_w_;
  col_.resize(static_cast<std::size_t>(kcols) * n);
  im2col(x.data.data(), cin_, in_h_, in_w_, k_, stride_, pad_, out_h_, out_w_,
         col_.data());

  Tensor y({cout_, out_h_, out_w_});
  CMapRM w(weight.value.data(), cout_, kcols);
  CMapCM col(col_.data(), kcols, static_cast<Eigen::Index>(n));
  MapRM ym(y.data.data(), cout_, static_cast<Eigen::Index>(n));
  ym.noalias() = w * col;
  for (int co = 0; co < cout_; ++co) ym.row(co).array() += bias.value[co];
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  const int kcols = cin_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(out_h_) * out_w_;
  CMapRM dym(dy.data.data(), cout_, static_cast<Eigen::Index>(n));
  CMapCM col(col_.data(), kcols, static_cast<Eigen::Index>(n));

  MapRM dw(weight.grad.data(), cout_, kcols);
  dw.noalias() += dym * col.transpose();
  for (int co = 0; co < cout_; ++co) bias.grad[co] += dym.row(co).sum();

  std::vector<float> dcol(static_cast<std::size_t>(kcols) * n);
  MapCM dcolm(dcol.data(), kcols, static_cast<Eigen::Index>(n));
  CMapRM w(weight.value.data(), cout_, kcols);
  dcolm.noalias() = w.transpose() * dym;

  Tensor dx({cin_, in_h_, in_w_});
  col2im(dcol.data(), cin_, in_h_, in_w_, k_, stride_, pad_, out_h_, out_w_,
         dx.data.data());
  return dx;
}

// ------------------------------------------------------- ConvTranspose2d

ConvTranspose2d::ConvTranspose2d(int cin, int cout, int k, int stride, int pad,
                                 int out_pad, std::string name)
    : cin_(cin), cout_(cout), k_(k), stride_(stride), pad_(pad), out_pad_(out_pad) {
  weight.name = name + ".weight";
  weight.resize(static_cast<std::size_t>(cin) * cout * k * k);
  bias.name = name + ".bias";
  bias.resize(static_cast<std::size_t>(cout));
}

void ConvTranspose2d::init_weights(Rng& rng) {
  const double fan_in = static_cast<double>(cin_) * k_ * k_ /
                        (static_cast<double>(stride_) * stride_);
  const double sd = std::sqrt(2.0 / std::max(1.0, fan_in));
  for (auto& v : weight.value) v = static_cast<float>(rng.normal(0.0, sd));
  for (auto& v : bias.value) v = 0.0f;
}

void ConvTranspose2d::collect_params(std::vector<Param*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

Tensor ConvTranspose2d::forward(const Tensor& x) {
  if (x.shape.size() != 3 || x.dim(0) != cin_)
    throw ShapeMismatch("conv_transpose2d input " + x.shape_str());
  in_h_ = x.dim(1);
  in_w_ = x.dim(2);
  out_h_ = (in_h_ - 1) * stride_ - 2 * pad_ + k_ + out_pad_;
  out_w_ = (in_w_ - 1) * stride_ - 2 * pad_ + k_ + out_pad_;
  cached_x_ = x;

  // Forward pass is the adjoint of a (k,stride,pad) convolution mapping the
  // (cout,out_h,out_w) grid down to (cin,in_h,in_w).
  const int kcols = cout_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(in_h_) * in_w_;
  std::vector<float> col(static_cast<std::size_t>(kcols) * n);
  MapCM colm(col.data(), kcols, static_cast<Eigen::Index>(n));
  CMapRM w(weight.value.data(), cin_, kcols);
  CMapRM xm(x.data.data(), cin_, static_cast<Eigen::Index>(n));
  colm.noalias() = w.transpose() * xm;

  Tensor y({cout_, out_h_, out_w_});
  col2im(col.data(), cout_, out_h_, out_w_, k_, stride_, pad_, in_h_, in_w_,
         y.data.data());
  float* yp = y.data.data();
  for (int co = 0; co < cout_; ++co) {
    const float b = bias.value[co];
    const std::size_t plane = static_cast<std::size_t>(out_h_) * out_w_;
    for (std::size_t i = 0; i < plane; ++i) yp[co * plane + i] += b;
  }
  return y;
}

Tensor ConvTranspose2d::backward(const Tensor& dy) {
  const int kcols = cout_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(in_h_) * in_w_;
  std::vector<float> col(static_cast<std::size_t>(kcols) * n);
  im2col(dy.data.data(), cout_, out_h_, out_w_, k_, stride_, pad_, in_h_, in_w_,
         col.data());
  CMapCM colm(col.data(), kcols, static_cast<Eigen::Index>(n));

  CMapRM xm(cached_x_.data.data(), cin_, static_cast<Eigen::Index>(n));
  MapRM dw(weight.grad.data(), cin_, kcols);
  dw.noalias() += xm * colm.transpose();

  const float* dyp = dy.data.data();
  const std::size_t plane = static_cast<std::size_t>(out_h_) * out_w_;
  for (int co = 0; co < cout_; ++co) {
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += dyp[co * plane + i];
    bias.grad[co] += static_cast<float>(s);
  }

  Tensor dx({cin_, in_h_, in_w_});
  MapRM dxm(dx.data.data(), cin_, static_cast<Eigen::Index>(n));
  CMapRM w(weight.value.data(), cin_, kcols);
  dxm.noalias() = w * colm;
  return dx;
}

// -------------------------------------------------------------- pointwise

Tensor ReLU::forward(const Tensor& x) {
  Tensor y = x;
  active_.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    active_[i] = x.data[i] > 0.0f;
    if (!active_[i]) y.data[i] = 0.0f;
  }
  return y;
}

Tensor ReLU::backward(const Tensor& dy) {
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i)
    if (!active_[i]) dx.data[i] = 0.0f;
  return dx;
}

Tensor Sigmoid::forward(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.data) v = 1.0f / (1.0f + std::exp(-v));
  out_ = y.data;
  return y;
}

Tensor Sigmoid::backward(const Tensor& dy) {
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i)
    dx.data[i] *= out_[i] * (1.0f - out_[i]);
  return dx;
}

// ---------------------------------------------------------------- pooling

Tensor MaxPool2d::forward(const Tensor& x) {
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  const int oh = h / 2, ow = w / 2;
  in_shape_ = x.shape;
  Tensor y({c, oh, ow});
  argmax_.resize(y.size());
  for (int ci = 0; ci < c; ++ci) {
    const float* plane = x.data.data() + static_cast<std::size_t>(ci) * h * w;
    for (int r = 0; r < oh; ++r) {
      for (int col = 0; col < ow; ++col) {
        int best = (2 * r) * w + 2 * col;
        float bv = plane[best];
        const int cand[3] = {(2 * r) * w + 2 * col + 1, (2 * r + 1) * w + 2 * col,
                             (2 * r + 1) * w + 2 * col + 1};
        for (int idx : cand) {
          if (plane[idx] > bv) {
            bv = plane[idx];
            best = idx;
          }
        }
        const std::size_t out_idx =
            (static_cast<std::size_t>(ci) * oh + r) * ow + col;
        y.data[out_idx] = bv;
        argmax_[out_idx] = ci * h * w + best;
      }
    }
  }
  return y;
}

Tensor MaxPool2d::backward(const Tensor& dy) {
  Tensor dx(in_shape_);
  for (std::size_t i = 0; i < dy.size(); ++i)
    dx.data[static_cast<std::size_t>(argmax_[i])] += dy.data[i];
  return dx;
}

Tensor GlobalAvgPool::forward(const Tensor& x) {
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  in_shape_ = x.shape;
  Tensor y({c});
  const double inv = 1.0 / (static_cast<double>(h) * w);
  for (int ci = 0; ci < c; ++ci) {
    double s = 0.0;
    const float* plane = x.data.data() + static_cast<std::size_t>(ci) * h * w;
    for (int i = 0; i < h * w; ++i) s += plane[i];
    y.data[ci] = static_cast<float>(s * inv);
  }
  return y;
}

Tensor GlobalAvgPool::backward(const Tensor& dy) {
  const int c = in_shape_[0], h = in_shape_[1], w = in_shape_[2];
  Tensor dx(in_shape_);
  const float inv = 1.0f / static_cast<float>(h * w);
  for (int ci = 0; ci < c; ++ci) {
    const float g = dy.data[ci] * inv;
    float* plane = dx.data.data() + static_cast<std::size_t>(ci) * h * w;
    for (int i = 0; i < h * w; ++i) plane[i] = g;
  }
  return dx;
}

// ----------------------------------------------------------------- linear

Linear::Linear(int in, int out, std::string name) : in_(in), out_(out) {
  weight.name = name + ".weight";
  weight.resize(static_cast<std::size_t>(in) * out);
  bias.name = name + ".bias";
  bias.resize(static_cast<std::size_t>(out));
}

void Linear::init_weights(Rng& rng) {
  const double bound = std::sqrt(6.0 / (in_ + out_));
  for (auto& v : weight.value) v = static_cast<float>(rng.uniform(-bound, bound));
  for (auto& v : bias.value) v = 0.0f;
}

void Linear::collect_params(std::vector<Param*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

Tensor Linear::forward(const Tensor& x) {
  if (static_cast<int>(x.size()) != in_)
    throw ShapeMismatch("linear input " + x.shape_str());
  cached_x_ = x.data;
  Tensor y({out_});
  CMapRM w(weight.value.data(), out_, in_);
  Eigen::Map<const Eigen::VectorXf> xv(x.data.data(), in_);
  Eigen::Map<Eigen::VectorXf> yv(y.data.data(), out_);
  yv.noalias() = w * xv;
  for (int o = 0; o < out_; ++o) y.data[o] += bias.value[o];
  return y;
}

Tensor Linear::backward(const Tensor& dy) {
  MapRM dw(weight.grad.data(), out_, in_);
  Eigen::Map<const Eigen::VectorXf> dyv(dy.data.data(), out_);
  Eigen::Map<const Eigen::VectorXf> xv(cached_x_.data(), in_);
  dw.noalias() += dyv * xv.transpose();
  for (int o = 0; o < out_; ++o) bias.grad[o] += dy.data[o];

  Tensor dx({in_});
  CMapRM w(weight.value.data(), out_, in_);
  Eigen::Map<Eigen::VectorXf> dxv(dx.data.data(), in_);
  dxv.noalias() = w.transpose() * dyv;
  return dx;
}

// ------------------------------------------------------------- sequential

Tensor Sequential::forward(const Tensor& x) {
  Tensor cur = x;
  for (auto& l : layers_) cur = l->forward(cur);
  return cur;
}

Tensor Sequential::backward(const Tensor& dy) {
  Tensor cur = dy;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
    cur = (*it)->backward(cur);
  return cur;
}

void Sequential::collect_params(std::vector<Param*>& out) {
  for (auto& l : layers_) l->collect_params(out);
}

void Sequential::init_weights(Rng& rng) {
  for (auto& l : layers_) l->init_weights(rng);
}

}  // namespace thermo::nn
