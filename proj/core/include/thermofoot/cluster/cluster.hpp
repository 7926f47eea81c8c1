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

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace thermo::cluster {

using FeatureMatrix = Eigen::MatrixXd;  // n rows x d columns

/// Agglomerative merge list, scipy-style node ids: leaves are 0..n-1 and the
/// t-th merge creates node n+t. Heights are Ward costs in Euclidean-distance
/// units (sqrt of the Lance-Williams distance), monotone non-decreasing.
struct LinkageTree {
  struct Merge {
    int a = 0;
    int b = 0;           // a < b
    double height = 0.0;
    int size = 0;        // size of the merged cluster
  };
  int n_leaves = 0;
  std::vector<Merge> merges;  // exactly n_leaves - 1
};

/// Ward linkage over Euclidean geometry via the Lance-Williams recurrence.
/// Ties in the candidate distance break on the lowest (a, b) node-id pair.
/// Throws TooFewPoints and NonFiniteFeature.
LinkageTree ward_linkage(const FeatureMatrix& features);

/// Partition into exactly k clusters by undoing the last k-1 merges.
/// Labels are 1..k, numbered by each cluster's smallest leaf index.
std::vector<int> cut_tree(const LinkageTree& tree, int k);

/// Explained variance fraction (between-cluster SS / total SS) for each
/// k = 1..k_max using cut_tree partitions. Endpoints are exact: 0 at k=1 and
/// 1 at k=n (when k_max = n).
std::vector<std::pair<int, double>> explained_variance_curve(
    const FeatureMatrix& features, const LinkageTree& tree, int k_max);

/// Elbow rule: the k with the maximal second difference of explained
/// variance (largest drop in marginal gain); ties pick the smallest k.
/// Throws CurveTooShort for curves with fewer than 3 points.
int select_k_elbow(const std::vector<std::pair<int, double>>& curve);

/// Mean silhouette over all points, Euclidean distances; singleton clusters
/// score 0. Throws SingleCluster when fewer than 2 clusters are present.
double silhouette_score(const FeatureMatrix& features,
                        const std::vector<int>& labels);

/// Per-cluster exemplar indices: members ordered by ascending Euclidean
/// distance to their cluster centroid (ties on index), truncated to m.
/// Returned in ascending cluster-label order. Throws InvalidM.
std::vector<std::vector<int>> cluster_exemplars(const FeatureMatrix& features,
                                                const std::vector<int>& labels,
                                                int m);

/// Chance-corrected partition agreement.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  std::uint64_t seed = 0;
};

/// Exact (dense) t-SNE to 2D. Requires n > 3 * perplexity, else throws
/// PerplexityTooLarge. Deterministic for a fixed seed.
Eigen::MatrixX2d tsne_embed(const FeatureMatrix& features, const TsneConfig& cfg);

}  // namespace thermo::cluster
