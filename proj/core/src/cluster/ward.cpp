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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/errors.hpp"

namespace thermo::cluster {
namespace {

// Pairwise squared Euclidean distances via the Gram expansion; tiny negative
// results from cancellation clamp to zero.
Eigen::MatrixXd squared_distances(const FeatureMatrix& x) {
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (x * x.transpose());
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

LinkageTree ward_linkage(const FeatureMatrix& features) {
  const int n = static_cast<int>(features.rows());
  if (n < 2) throw TooFewPoints("ward_linkage needs n >= 2, got " + std::to_string(n));
  if (!features.allFinite())
    throw NonFiniteFeature("ward_linkage: features contain non-finite values");

  Eigen::MatrixXd d2 = squared_distances(features);
  std::vector<int> node_id(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::iota(node_id.begin(), node_id.end(), 0);

  LinkageTree tree;
  tree.n_leaves = n;
  tree.merges.reserve(static_cast<std::size_t>(n) - 1);

  for (int t = 0; t < n - 1; ++t) {
    // Scan active pairs for the minimal Ward distance; ties break on the
    // lowest (node_a, node_b) pair.
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double d = d2(i, j);
        const int a = std::min(node_id[i], node_id[j]);
        const int b = std::max(node_id[i], node_id[j]);
        bool better = d < best;
        if (!better && d == best && bi >= 0) {
          const int ca = std::min(node_id[bi], node_id[bj]);
          const int cb = std::max(node_id[bi], node_id[bj]);
          better = a < ca || (a == ca && b < cb);
        }
        if (better) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }

    const int ni = size[bi], nj = size[bj];
    LinkageTree::Merge m;
    m.a = std::min(node_id[bi], node_id[bj]);
    m.b = std::max(node_id[bi], node_id[bj]);
    m.height = std::sqrt(std::max(0.0, best));
    m.size = ni + nj;
    tree.merges.push_back(m);

    // Lance-Williams update for Ward: merged cluster occupies slot bi.
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double nk = size[k];
      const double denom = ni + nj + nk;
      const double upd = ((ni + nk) * d2(bi, k) + (nj + nk) * d2(bj, k) -
                          nk * best) / denom;
      d2(bi, k) = d2(k, bi) = std::max(0.0, upd);
    }
    active[bj] = false;
    size[bi] = ni + nj;
    node_id[bi] = n + t;
  }
  return tree;
}

std::vector<int> cut_tree(const LinkageTree& tree, int k) {
  const int n = tree.n_leaves;
  if (k < 1 || k > n)
    throw InvalidK("cut_tree: k=" + std::to_string(k) + " outside [1," +
                   std::to_string(n) + "]");

  // Union-find over node ids; apply the first n-k merges.
  std::vector<int> parent(static_cast<std::size_t>(2 * n - 1));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (int t = 0; t < n - k; ++t) {
    const auto& m = tree.merges[static_cast<std::size_t>(t)];
    const int target = n + t;
    parent[find(m.a)] = target;
    parent[find(m.b)] = target;
  }

  // Number clusters 1..k by smallest leaf index.
  std::map<int, int> root_to_label;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    auto it = root_to_label.find(root);
    if (it == root_to_label.end())
      it = root_to_label.emplace(root, ++next).first;
    labels[static_cast<std::size_t>(i)] = it->second;
  }
  return labels;
}

std::vector<std::pair<int, double>> explained_variance_curve(
    const FeatureMatrix& features, const LinkageTree& tree, int k_max) {
  const int n = tree.n_leaves;
  if (k_max < 1 || k_max > n)
    throw InvalidK("explained_variance_curve: k_max=" + std::to_string(k_max));

  auto wcss_of = [&](const std::vector<int>& labels, int k) {
    std::vector<Eigen::RowVectorXd> centroid(
        static_cast<std::size_t>(k),
        Eigen::RowVectorXd::Zero(features.cols()));
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      centroid[static_cast<std::size_t>(labels[i] - 1)] += features.row(i);
      ++count[static_cast<std::size_t>(labels[i] - 1)];
    }
    for (int c = 0; c < k; ++c) centroid[c] /= static_cast<double>(count[c]);
    double wcss = 0.0;
    for (int i = 0; i < n; ++i)
      wcss += (features.row(i) - centroid[static_cast<std::size_t>(labels[i] - 1)])
                  .squaredNorm();
    return wcss;
  };

  const std::vector<int> ones(static_cast<std::size_t>(n), 1);
  const double tss = wcss_of(ones, 1);
  std::vector<std::pair<int, double>> curve;
  curve.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const auto labels = cut_tree(tree, k);
    const double wcss = wcss_of(labels, k);
    const double frac = tss > 0.0 ? 1.0 - wcss / tss : 1.0;
    curve.emplace_back(k, frac);
  }
  return curve;
}

int select_k_elbow(const std::vector<std::pair<int, double>>& curve) {
  if (curve.size() < 3)
    throw CurveTooShort("elbow needs at least 3 curve points, got " +
                        std::to_string(curve.size()));
  int best_k = curve[1].first;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    // Second difference: gain before the point minus gain after it.
    const double d = 2.0 * curve[i].second - curve[i - 1].second -
                     curve[i + 1].second;
    if (d > best) {
      best = d;
      best_k = curve[i].first;
    }
  }
  return best_k;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  std::map<std::pair<int, int>, long long> cont;
  std::map<int, long long> ra, rb;
  for (std::size_t i = 0; i < n; ++i) {
    ++cont[{a[i], b[i]}];
    ++ra[a[i]];
    ++rb[b[i]];
  }
  auto choose2 = [](long long v) { return static_cast<double>(v) * (v - 1) / 2.0; };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, v] : cont) sum_ij += choose2(v);
  for (const auto& [key, v] : ra) sum_a += choose2(v);
  for (const auto& [key, v] : rb) sum_b += choose2(v);
  const double total = choose2(static_cast<long long>(n));
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (sum_ij - expected) / (max_index - expected);
}

}  // namespace thermo::cluster
