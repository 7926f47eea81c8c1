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

#include <cmath>
#include <limits>

#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/errors.hpp"
#include "thermofoot/rng.hpp"

namespace thermo::cluster {

Eigen::MatrixX2d tsne_embed(const FeatureMatrix& features, const TsneConfig& cfg) {
  const int n = static_cast<int>(features.rows());
  if (n <= 3 * cfg.perplexity)
    throw PerplexityTooLarge("t-SNE needs n > 3*perplexity (n=" +
                             std::to_string(n) + ", perplexity=" +
                             std::to_string(cfg.perplexity) + ")");
  if (!features.allFinite())
    throw NonFiniteFeature("t-SNE: features contain non-finite values");

  const Eigen::VectorXd sq = features.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (features * features.transpose());
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  d2 = d2.cwiseMax(0.0);

  // Per-point precision calibrated by bisection to hit the target entropy.
  const double target_h = std::log(cfg.perplexity);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    Eigen::VectorXd row(n);
    for (int it = 0; it < 64; ++it) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        row(j) = j == i ? 0.0 : std::exp(-beta * d2(i, j));
        sum += row(j);
      }
      double h = 0.0;
      if (sum > 0.0) {
        for (int j = 0; j < n; ++j) {
          if (j == i || row(j) <= 0.0) continue;
          const double pj = row(j) / sum;
          h -= pj * std::log(pj);
        }
      }
      if (std::abs(h - target_h) < 1e-7) break;
      if (h > target_h) {  // too flat -> sharpen
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    double sum = row.sum();
    if (sum <= 0.0) sum = 1.0;
    for (int j = 0; j < n; ++j) p(i, j) = row(j) / sum;
  }
  p = (p + p.transpose()) / (2.0 * n);
  p = p.cwiseMax(1e-12);

  Rng rng(Rng::derive(cfg.seed, 0x75e0u));
  Eigen::MatrixX2d y(n, 2);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) y(i, c) = rng.normal(0.0, 1e-2);

  Eigen::MatrixX2d inc = Eigen::MatrixX2d::Zero(n, 2);
  Eigen::MatrixX2d gains = Eigen::MatrixX2d::Ones(n, 2);
  const int exaggeration_until = std::min(250, cfg.iterations / 4);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const double exaggeration = iter < exaggeration_until ? 12.0 : 1.0;
    const double momentum = iter < 250 ? 0.5 : 0.8;

    // Student-t affinities in the embedding.
    Eigen::MatrixXd w(n, n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      w(i, i) = 0.0;
      for (int j = i + 1; j < n; ++j) {
        const double dy0 = y(i, 0) - y(j, 0);
        const double dy1 = y(i, 1) - y(j, 1);
        const double v = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
        w(i, j) = w(j, i) = v;
        wsum += 2.0 * v;
      }
    }

    Eigen::MatrixX2d grad = Eigen::MatrixX2d::Zero(n, 2);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double q = std::max(w(i, j) / wsum, 1e-12);
        const double mult = (exaggeration * p(i, j) - q) * w(i, j);
        grad(i, 0) += 4.0 * mult * (y(i, 0) - y(j, 0));
        grad(i, 1) += 4.0 * mult * (y(i, 1) - y(j, 1));
      }
    }

    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (inc(i, c) > 0.0);
        gains(i, c) = std::max(0.01, same_sign ? gains(i, c) * 0.8
                                               : gains(i, c) + 0.2);
        inc(i, c) = momentum * inc(i, c) -
                    cfg.learning_rate * gains(i, c) * grad(i, c);
        y(i, c) += inc(i, c);
      }
    }
    const Eigen::RowVector2d mean = y.colwise().mean();
    y.rowwise() -= mean;
  }
  if (!y.allFinite()) throw NonFiniteFeature("t-SNE produced non-finite output");
  return y;
}

}  // namespace thermo::cluster
