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
#include <limits>
#include <map>
#include <set>

#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/errors.hpp"

namespace thermo::cluster {

double silhouette_score(const FeatureMatrix& features,
                        const std::vector<int>& labels) {
  const int n = static_cast<int>(features.rows());
  if (static_cast<int>(labels.size()) != n)
    throw ShapeMismatch("silhouette: labels/features size mismatch");
  std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2)
    throw SingleCluster("silhouette needs at least 2 clusters");

  std::map<int, int> cluster_size;
  for (int l : labels) ++cluster_size[l];

  // Euclidean distance matrix from the Gram expansion.
  const Eigen::VectorXd sq = features.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (features * features.transpose());
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  Eigen::MatrixXd dist = d2.cwiseMax(0.0).cwiseSqrt();

  double total = 0.0;
  std::map<int, double> sums;  // per-cluster distance sums for one point
  for (int i = 0; i < n; ++i) {
    if (cluster_size[labels[i]] == 1) continue;  // singleton scores 0
    sums.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sums[labels[j]] += dist(i, j);
    }
    const double a = sums[labels[i]] / (cluster_size[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [lab, s] : sums) {
      if (lab == labels[i]) continue;
      b = std::min(b, s / cluster_size[lab]);
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

std::vector<std::vector<int>> cluster_exemplars(const FeatureMatrix& features,
                                                const std::vector<int>& labels,
                                                int m) {
  if (m < 1) throw InvalidM("cluster_exemplars needs m >= 1");
  const int n = static_cast<int>(features.rows());
  std::map<int, std::vector<int>> members;
  for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);

  std::vector<std::vector<int>> out;
  for (const auto& [lab, idx] : members) {
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(features.cols());
    for (int i : idx) centroid += features.row(i);
    centroid /= static_cast<double>(idx.size());
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(idx.size());
    for (int i : idx)
      ranked.emplace_back((features.row(i) - centroid).norm(), i);
    std::sort(ranked.begin(), ranked.end());
    std::vector<int> top;
    for (std::size_t j = 0; j < ranked.size() && j < static_cast<std::size_t>(m); ++j)
      top.push_back(ranked[j].second);
    out.push_back(std::move(top));
  }
  return out;
}

}  // namespace thermo::cluster
