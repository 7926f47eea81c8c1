#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <set>

#include "thermofoot/errors.hpp"
#include "thermofoot/nn/layers.hpp"
#include "thermofoot/nn/losses.hpp"
#include "thermofoot/nn/serialize.hpp"
#include "thermofoot/nn/train.hpp"
#include "thermofoot/rng.hpp"

using namespace thermo;
using nn::Tensor;

namespace {

// Scalar objective for gradient checks: 0.5 * sum(y^2).
double objective(const Tensor& y) {
  double s = 0.0;
  for (float v : y.data) s += 0.5 * static_cast<double>(v) * v;
  return s;
}

Tensor objective_grad(const Tensor& y) {
  Tensor g = y;
  return g;
}

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = static_cast<float>(rng.normal(0.0, scale));
  return t;
}

// Central finite differences on every input element and every parameter.
void check_gradients(nn::Layer& layer, const Tensor& x, double tol = 2e-2) {
  Tensor y = layer.forward(x);
  Tensor dx = layer.backward(objective_grad(y));

  const double h = 1e-2;
  auto forward_obj = [&](const Tensor& xin) { return objective(layer.forward(xin)); };

  for (std::size_t i = 0; i < x.size(); i += std::max<std::size_t>(1, x.size() / 64)) {
    Tensor xp = x, xm = x;
    xp.data[i] += static_cast<float>(h);
    xm.data[i] -= static_cast<float>(h);
    const double fd = (forward_obj(xp) - forward_obj(xm)) / (2.0 * h);
    CHECK(dx.data[i] == doctest::Approx(fd).epsilon(tol).scale(1.0));
  }

  std::vector<nn::Param*> params;
  layer.collect_params(params);
  layer.forward(x);
  for (auto* p : params) std::fill(p->grad.begin(), p->grad.end(), 0.0f);
  Tensor y2 = layer.forward(x);
  layer.backward(objective_grad(y2));
  for (auto* p : params) {
    for (std::size_t i = 0; i < p->value.size();
         i += std::max<std::size_t>(1, p->value.size() / 48)) {
      const float orig = p->value[i];
      p->value[i] = orig + static_cast<float>(h);
      const double fp = forward_obj(x);
      p->value[i] = orig - static_cast<float>(h);
      const double fm = forward_obj(x);
      p->value[i] = orig;
      const double fd = (fp - fm) / (2.0 * h);
      CHECK(p->grad[i] == doctest::Approx(fd).epsilon(tol).scale(1.0));
    }
  }
}

}  // namespace

TEST_CASE("conv2d matches a hand-computed 1x1 example") {
  nn::Conv2d conv(1, 1, 3, 1, 1, "c");
  // identity-ish kernel: only center tap
  std::fill(conv.weight.value.begin(), conv.weight.value.end(), 0.0f);
  conv.weight.value[4] = 2.0f;  // center of the 3x3
  conv.bias.value[0] = 1.0f;
  Tensor x({1, 2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});
  Tensor y = conv.forward(x);
  CHECK(y.data[0] == 3.0f);   // 2*1+1
  CHECK(y.data[3] == 9.0f);   // 2*4+1
}

TEST_CASE("conv2d stride-2 output shape") {
  nn::Conv2d conv(3, 16, 3, 2, 1, "c");
  Rng rng(1);
  conv.init_weights(rng);
  Tensor x = random_tensor({3, 224, 224}, rng);
  Tensor y = conv.forward(x);
  CHECK(y.shape == std::vector<int>{16, 112, 112});
}

TEST_CASE("conv2d gradients match finite differences") {
  Rng rng(7);
  nn::Conv2d conv(2, 3, 3, 1, 1, "c");
  conv.init_weights(rng);
  check_gradients(conv, random_tensor({2, 6, 5}, rng));
}

TEST_CASE("strided conv2d gradients match finite differences") {
  Rng rng(8);
  nn::Conv2d conv(2, 4, 3, 2, 1, "c");
  conv.init_weights(rng);
  check_gradients(conv, random_tensor({2, 8, 7}, rng));
}

TEST_CASE("conv_transpose2d doubles spatial size and matches finite differences") {
  Rng rng(9);
  nn::ConvTranspose2d up(3, 2, 3, 2, 1, 1, "u");
  up.init_weights(rng);
  Tensor x = random_tensor({3, 5, 4}, rng);
  Tensor y = up.forward(x);
  CHECK(y.shape == std::vector<int>{2, 10, 8});
  check_gradients(up, x);
}

TEST_CASE("conv_transpose2d with k=2 s=2 matches finite differences") {
  Rng rng(10);
  nn::ConvTranspose2d up(4, 2, 2, 2, 0, 0, "u");
  up.init_weights(rng);
  Tensor x = random_tensor({4, 3, 3}, rng);
  Tensor y = up.forward(x);
  CHECK(y.shape == std::vector<int>{2, 6, 6});
  check_gradients(up, x);
}

TEST_CASE("conv_transpose2d is the adjoint of conv2d") {
  // <conv(x), y> == <x, convT(y)> when convT shares the kernel.
  Rng rng(11);
  nn::Conv2d conv(2, 3, 3, 2, 1, "c");
  conv.init_weights(rng);
  std::fill(conv.bias.value.begin(), conv.bias.value.end(), 0.0f);
  nn::ConvTranspose2d up(3, 2, 3, 2, 1, 1, "u");
  up.weight.value = conv.weight.value;  // same layout by construction
  std::fill(up.bias.value.begin(), up.bias.value.end(), 0.0f);

  Tensor x = random_tensor({2, 8, 8}, rng);
  Tensor y = random_tensor({3, 4, 4}, rng);
  Tensor cx = conv.forward(x);
  Tensor uy = up.forward(y);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < cx.size(); ++i) lhs += static_cast<double>(cx.data[i]) * y.data[i];
  for (std::size_t i = 0; i < uy.size(); ++i) rhs += static_cast<double>(uy.data[i]) * x.data[i];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("maxpool and relu backward route gradients to the right places") {
  Rng rng(12);
  nn::MaxPool2d pool;
  Tensor x({1, 4, 4}, {1, 2, 3, 4,
                       8, 7, 6, 5,
                       1, 1, 2, 2,
                       1, 9, 2, 3});
  Tensor y = pool.forward(x);
  CHECK(y.data == std::vector<float>{8, 6, 9, 3});
  Tensor dy({1, 2, 2}, {1, 1, 1, 1});
  Tensor dx = pool.backward(dy);
  CHECK(dx.data[4] == 1.0f);   // the 8
  CHECK(dx.data[6] == 1.0f);   // the 6
  CHECK(dx.data[13] == 1.0f);  // the 9
  CHECK(dx.data[15] == 1.0f);  // the 3
  CHECK(dx.data[0] == 0.0f);

  nn::ReLU relu;
  check_gradients(relu, random_tensor({2, 5, 5}, rng));
}

TEST_CASE("linear and global average pooling gradients") {
  Rng rng(13);
  nn::Linear lin(6, 4, "l");
  lin.init_weights(rng);
  check_gradients(lin, random_tensor({6}, rng));

  nn::GlobalAvgPool gap;
  check_gradients(gap, random_tensor({3, 4, 4}, rng));
}

TEST_CASE("sigmoid gradients") {
  Rng rng(14);
  nn::Sigmoid sig;
  check_gradients(sig, random_tensor({2, 3, 3}, rng));
}

TEST_CASE("losses: values and gradients") {
  Tensor z({4}, {0.0f, 1.0f, -1.0f, 2.0f});
  Tensor t({4}, {0.0f, 1.0f, 0.0f, 1.0f});

  SUBCASE("mse definitional values") {
    Tensor a({2}, {0.0f, 0.0f});
    Tensor b({2}, {1.0f, 1.0f});
    CHECK(nn::mse_loss(a, b).loss == doctest::Approx(1.0));
    CHECK(nn::l1_error(a, b) == doctest::Approx(1.0));
  }

  SUBCASE("bce matches direct formula and gradient is (p-t)/n") {
    auto lg = nn::bce_with_logits(z, t);
    double expect = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-z.data[i]));
      expect += -(t.data[i] * std::log(p) + (1 - t.data[i]) * std::log(1 - p));
    }
    CHECK(lg.loss == doctest::Approx(expect / 4.0));
    for (int i = 0; i < 4; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-z.data[i]));
      CHECK(lg.grad.data[i] == doctest::Approx((p - t.data[i]) / 4.0));
    }
  }

  SUBCASE("dice gradient matches finite differences") {
    auto base = nn::dice_with_logits(z, t);
    const double h = 1e-4;
    for (int i = 0; i < 4; ++i) {
      Tensor zp = z, zm = z;
      zp.data[i] += static_cast<float>(h);
      zm.data[i] -= static_cast<float>(h);
      const double fd = (nn::dice_with_logits(zp, t).loss -
                         nn::dice_with_logits(zm, t).loss) / (2.0 * h);
      CHECK(base.grad.data[i] == doctest::Approx(fd).epsilon(1e-3));
    }
  }
}

TEST_CASE("adam converges on a quadratic") {
  nn::Param p;
  p.name = "w";
  p.resize(3);
  p.value = {5.0f, -3.0f, 2.0f};
  nn::Adam adam({&p}, 0.1);
  for (int it = 0; it < 500; ++it) {
    adam.zero_grad();
    for (int i = 0; i < 3; ++i) p.grad[i] = 2.0f * p.value[i];
    adam.step();
  }
  for (int i = 0; i < 3; ++i) CHECK(std::abs(p.value[i]) < 1e-2f);
}

TEST_CASE("fit runs early stopping and restores the best weights") {
  // Fit y = w*x on one sample; "validation" is the squared error itself.
  nn::Param w;
  w.name = "w";
  w.resize(1);
  w.value[0] = 0.0f;
  nn::TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.patience = 10;
  cfg.lr = 0.05;
  cfg.batch_size = 1;
  auto train_sample = [&](int) {
    const double pred = w.value[0] * 2.0;
    const double err = pred - 6.0;  // target w = 3
    w.grad[0] += static_cast<float>(2.0 * err * 2.0);
    return err * err;
  };
  auto validate = [&]() {
    const double err = w.value[0] * 2.0 - 6.0;
    return err * err;
  };
  auto result = nn::fit({&w}, 1, cfg, /*maximize=*/false, train_sample, validate);
  CHECK(w.value[0] == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(result.best_epoch >= 0);
  CHECK(result.epochs_run <= 200);
}

TEST_CASE("checkpoint save/load round-trips parameters") {
  Rng rng(15);
  nn::Conv2d a(2, 3, 3, 1, 1, "layer");
  a.init_weights(rng);
  std::vector<nn::Param*> pa;
  a.collect_params(pa);
  const std::string path =
      (std::filesystem::temp_directory_path() / "thermofoot_tests_ckpt.bin").string();
  nn::save_params(path, pa);

  nn::Conv2d b(2, 3, 3, 1, 1, "layer");
  std::vector<nn::Param*> pb;
  b.collect_params(pb);
  nn::load_params(path, pb);
  CHECK(a.weight.value == b.weight.value);
  CHECK(a.bias.value == b.bias.value);

  nn::Conv2d c(2, 3, 3, 1, 1, "other");
  std::vector<nn::Param*> pc;
  c.collect_params(pc);
  CHECK_THROWS_AS(nn::load_params(path, pc), SchemaMismatch);
}

TEST_CASE("train_val_split is deterministic, disjoint and exhaustive") {
  auto [train, val] = nn::train_val_split(100, 0.15, 42);
  auto [train2, val2] = nn::train_val_split(100, 0.15, 42);
  CHECK(train == train2);
  CHECK(val == val2);
  CHECK(train.size() + val.size() == 100);
  std::set<int> seen(train.begin(), train.end());
  for (int v : val) CHECK(!seen.count(v));
}
