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

#include "thermofoot/seg/unet.hpp"

#include <cmath>

#include "thermofoot/errors.hpp"
#include "thermofoot/nn/losses.hpp"
#include "thermofoot/nn/serialize.hpp"
#include "thermofoot/seg/metrics.hpp"

namespace thermo::seg {
namespace {

nn::Tensor concat_channels(const nn::Tensor& a, const nn::Tensor& b) {
  nn::Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.size());
  return out;
}

void split_channels(const nn::Tensor& d, int ch_a, nn::Tensor& da, nn::Tensor& db) {
  da = nn::Tensor({ch_a, d.dim(1), d.dim(2)});
  db = nn::Tensor({d.dim(0) - ch_a, d.dim(1), d.dim(2)});
  std::copy(d.data.begin(), d.data.begin() + da.size(), da.data.begin());
  std::copy(d.data.begin() + da.size(), d.data.end(), db.data.begin());
}

}  // namespace

UNet::UNet(int in_channels, int base, int depth, std::uint64_t seed)
    : depth_(depth) {
  const int stages = depth - 1;
  enc_relu_.resize(stages);
  pool_.resize(stages);
  dec_relu_.resize(stages);
  int cin = in_channels;
  for (int l = 0; l < stages; ++l) {
    const int cout = base << l;
    enc_.push_back(std::make_unique<nn::Conv2d>(cin, cout, 3, 1, 1,
                                                "enc" + std::to_string(l)));
    cin = cout;
  }
  const int cbot = base << stages;
  bottleneck_ = std::make_unique<nn::Conv2d>(cin, cbot, 3, 1, 1, "bottleneck");
  for (int l = stages - 1; l >= 0; --l) {
    const int ch = base << l;
    const int ch_in = l == stages - 1 ? cbot : (base << (l + 1));
    up_.push_back(std::make_unique<nn::ConvTranspose2d>(ch_in, ch, 2, 2, 0, 0,
                                                        "up" + std::to_string(l)));
    dec_.push_back(std::make_unique<nn::Conv2d>(2 * ch, ch, 3, 1, 1,
                                                "dec" + std::to_string(l)));
  }
  head_ = std::make_unique<nn::Conv2d>(base, 1, 1, 1, 0, "head");

  Rng rng(Rng::derive(seed, 0x0e7u));
  for (auto& l : enc_) l->init_weights(rng);
  bottleneck_->init_weights(rng);
  for (auto& l : up_) l->init_weights(rng);
  for (auto& l : dec_) l->init_weights(rng);
  head_->init_weights(rng);
}

std::vector<nn::Param*> UNet::params() {
  std::vector<nn::Param*> out;
  for (auto& l : enc_) l->collect_params(out);
  bottleneck_->collect_params(out);
  for (auto& l : up_) l->collect_params(out);
  for (auto& l : dec_) l->collect_params(out);
  head_->collect_params(out);
  return out;
}

nn::Tensor UNet::forward(const nn::Tensor& x) {
  const int stages = depth_ - 1;
  skips_.assign(static_cast<std::size_t>(stages), nn::Tensor{});
  nn::Tensor cur = x;
  for (int l = 0; l < stages; ++l) {
    skips_[l] = enc_relu_[l].forward(enc_[l]->forward(cur));
    cur = pool_[l].forward(skips_[l]);
  }
  cur = bottleneck_relu_.forward(bottleneck_->forward(cur));
  // up_/dec_ are stored deepest-first: index 0 handles level stages-1.
  for (int i = 0; i < stages; ++i) {
    const int l = stages - 1 - i;
    cur = up_[i]->forward(cur);
    cur = concat_channels(cur, skips_[l]);
    cur = dec_relu_[l].forward(dec_[i]->forward(cur));
  }
  return head_->forward(cur);
}

void UNet::backward(const nn::Tensor& dlogits) {
  const int stages = depth_ - 1;
  std::vector<nn::Tensor> dskip(static_cast<std::size_t>(stages));
  nn::Tensor cur = head_->backward(dlogits);
  for (int i = stages - 1; i >= 0; --i) {
    const int l = stages - 1 - i;
    cur = dec_[i]->backward(dec_relu_[l].backward(cur));
    nn::Tensor dup, dsk;
    split_channels(cur, cur.dim(0) / 2, dup, dsk);
    dskip[l] = std::move(dsk);
    cur = up_[i]->backward(dup);
  }
  cur = bottleneck_->backward(bottleneck_relu_.backward(cur));
  for (int l = stages - 1; l >= 0; --l) {
    nn::Tensor ds = pool_[l].backward(cur);
    for (std::size_t i = 0; i < ds.size(); ++i) ds.data[i] += dskip[l].data[i];
    cur = enc_[l]->backward(enc_relu_[l].backward(ds));
  }
}

// ---------------------------------------------------------------- Segmenter

Segmenter::Segmenter(SegmenterConfig cfg) : cfg_(cfg) {
  net_ = std::make_unique<UNet>(3, cfg_.base_channels, cfg_.depth,
                                cfg_.train.seed);
}

nn::Tensor Segmenter::prepare(const VisualImage& visual) const {
  const int s = cfg_.input_size;
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
}

nn::Tensor Segmenter::prepare_mask(const BinaryMask& mask) const {
  const int s = cfg_.input_size;
  BinaryMask m = imgproc::pad_to_square(mask);
  m = imgproc::resize_nearest(m, s, s);
  nn::Tensor out({1, s, s});
  for (std::size_t i = 0; i < m.values.size(); ++i)
    out.data[i] = static_cast<float>(m.values[i]);
  return out;
}

nn::FitResult Segmenter::fit(const std::vector<ImagePair>& pairs,
                             const std::vector<BinaryMask>& masks) {
  std::vector<const VisualImage*> images;
  std::vector<const BinaryMask*> mptrs;
  for (const auto& p : pairs) images.push_back(&p.visual);
  for (const auto& m : masks) mptrs.push_back(&m);
  return fit_images(images, mptrs);
}

nn::FitResult Segmenter::fit_images(const std::vector<const VisualImage*>& images,
                                    const std::vector<const BinaryMask*>& masks) {
  if (images.empty()) throw EmptyDataset("segmenter: no training pairs");
  if (images.size() != masks.size())
    throw DimensionMismatch("segmenter: images/masks count mismatch");

  const int n = static_cast<int>(images.size());
  auto [train_idx, val_idx] =
      nn::train_val_split(n, cfg_.train.val_fraction, cfg_.train.seed);

  std::vector<nn::Tensor> xs(static_cast<std::size_t>(n));
  std::vector<nn::Tensor> ys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[i] = prepare(*images[i]);
    ys[i] = prepare_mask(*masks[i]);
  }

  auto train_sample = [&](int k) {
    const int i = train_idx[static_cast<std::size_t>(k)];
    nn::Tensor logits = net_->forward(xs[i]);
    auto bce = nn::bce_with_logits(logits, ys[i]);
    auto dice = nn::dice_with_logits(logits, ys[i]);
    nn::Tensor grad(logits.shape);
    for (std::size_t j = 0; j < grad.size(); ++j)
      grad.data[j] = static_cast<float>(cfg_.bce_weight * bce.grad.data[j] +
                                        cfg_.dice_weight * dice.grad.data[j]);
    net_->backward(grad);
    return cfg_.bce_weight * bce.loss + cfg_.dice_weight * dice.loss;
  };
  auto validate = [&]() {
    double sum = 0.0;
    for (int i : val_idx) {
      nn::Tensor logits = net_->forward(xs[i]);
      BinaryMask pred, truth;
      pred.height = truth.height = cfg_.input_size;
      pred.width = truth.width = cfg_.input_size;
      pred.values.resize(logits.size());
      truth.values.resize(logits.size());
      for (std::size_t j = 0; j < logits.size(); ++j) {
        pred.values[j] = logits.data[j] > 0.0f ? 1 : 0;  // sigmoid(z)>0.5
        truth.values[j] = ys[i].data[j] > 0.5f ? 1 : 0;
      }
      sum += iou(pred, truth);
    }
    return sum / static_cast<double>(val_idx.size());
  };

  return nn::fit(net_->params(), static_cast<int>(train_idx.size()), cfg_.train,
                 /*maximize_metric=*/true, train_sample, validate);
}

imgproc::FloatPlane Segmenter::predict_prob(const VisualImage& visual) {
  nn::Tensor logits = net_->forward(prepare(visual));
  imgproc::FloatPlane prob;
  prob.height = prob.width = cfg_.input_size;
  prob.values.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i)
    prob.values[i] = 1.0f / (1.0f + std::exp(-logits.data[i]));
  return prob;
}

BinaryMask Segmenter::predict(const VisualImage& visual) {
  imgproc::FloatPlane prob = predict_prob(visual);
  BinaryMask at_train_res;
  at_train_res.height = prob.height;
  at_train_res.width = prob.width;
  at_train_res.values.resize(prob.values.size());
  for (std::size_t i = 0; i < prob.values.size(); ++i)
    at_train_res.values[i] = prob.values[i] > 0.5f ? 1 : 0;
  return imgproc::restore_mask(at_train_res, visual.height, visual.width);
}

void Segmenter::save(const std::string& path) {
  nn::save_params(path, net_->params());
}

void Segmenter::load(const std::string& path) {
  nn::load_params(path, net_->params());
}

Segmenter train_segmenter(const std::vector<ImagePair>& pairs,
                          const std::vector<BinaryMask>& masks,
                          const SegmenterConfig& cfg, nn::FitResult* log) {
  Segmenter seg(cfg);
  nn::FitResult result = seg.fit(pairs, masks);
  if (log) *log = std::move(result);
  return seg;
}

}  // namespace thermo::seg
