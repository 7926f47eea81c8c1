#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles/oracles.hpp"
#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/errors.hpp"
#include "thermofoot/rng.hpp"

using namespace thermo;
using cluster::FeatureMatrix;

namespace {

FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[0].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

// Leaf sets of every merge, for comparing against the oracle.
std::vector<std::set<int>> merge_leafsets(const cluster::LinkageTree& tree) {
  const int n = tree.n_leaves;
  std::vector<std::set<int>> node_leaves(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) node_leaves[static_cast<std::size_t>(i)] = {i};
  std::vector<std::set<int>> out;
  for (std::size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& m = tree.merges[t];
    std::set<int> merged = node_leaves[static_cast<std::size_t>(m.a)];
    merged.insert(node_leaves[static_cast<std::size_t>(m.b)].begin(),
                  node_leaves[static_cast<std::size_t>(m.b)].end());
    node_leaves[static_cast<std::size_t>(tree.n_leaves) + t] = merged;
    out.push_back(merged);
  }
  return out;
}

std::vector<std::vector<double>> random_points(int n, int d, Rng& rng) {
  std::vector<std::vector<double>> x(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& row : x)
    for (auto& v : row) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("ward on {0,1,10}: first merge is {0,1}, k=2 cut is {{0,1},{10}}") {
  const FeatureMatrix x = from_rows({{0.0}, {1.0}, {10.0}});
  const auto tree = cluster::ward_linkage(x);
  REQUIRE(tree.merges.size() == 2);
  CHECK(tree.merges[0].a == 0);
  CHECK(tree.merges[0].b == 1);
  const auto labels = cluster::cut_tree(tree, 2);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[0] != labels[2]);
}

TEST_CASE("identical points merge at height zero") {
  const FeatureMatrix x = from_rows({{2.0, 1.0}, {2.0, 1.0}, {2.0, 1.0}});
  const auto tree = cluster::ward_linkage(x);
  for (const auto& m : tree.merges) CHECK(m.height == 0.0);
}

TEST_CASE("ward matches the exhaustive-agglomeration oracle on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 5));  // n <= 8
    const int d = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const auto pts = random_points(n, d, rng);
    const auto tree = cluster::ward_linkage(from_rows(pts));
    const auto oracle = oracles::exhaustive_ward(pts);
    const auto impl_sets = merge_leafsets(tree);
    REQUIRE(impl_sets.size() == oracle.size());
    for (std::size_t t = 0; t < oracle.size(); ++t) {
      std::set<int> oracle_merged = oracle[t].left;
      oracle_merged.insert(oracle[t].right.begin(), oracle[t].right.end());
      CHECK(impl_sets[t] == oracle_merged);
      CHECK(tree.merges[t].height ==
            doctest::Approx(oracle[t].height).epsilon(1e-9));
    }
  }
}

TEST_CASE("ward heights are monotone non-decreasing") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(30, 4, rng);
    const auto tree = cluster::ward_linkage(from_rows(pts));
    for (std::size_t t = 1; t < tree.merges.size(); ++t)
      CHECK(tree.merges[t].height >= tree.merges[t - 1].height - 1e-9);
  }
}

TEST_CASE("permuting rows relabels but does not change the tree") {
  Rng rng(41);
  const auto pts = random_points(12, 3, rng);
  std::vector<int> perm(12);
  for (int i = 0; i < 12; ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<std::vector<double>> permuted(12);
  for (int i = 0; i < 12; ++i) permuted[static_cast<std::size_t>(i)] =
      pts[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];

  const auto tree_a = cluster::ward_linkage(from_rows(pts));
  const auto tree_b = cluster::ward_linkage(from_rows(permuted));
  auto sets_a = merge_leafsets(tree_a);
  auto sets_b = merge_leafsets(tree_b);
  // unpermute b's leaf ids
  for (auto& s : sets_b) {
    std::set<int> mapped;
    for (int v : s) mapped.insert(perm[static_cast<std::size_t>(v)]);
    s = mapped;
  }
  REQUIRE(sets_a.size() == sets_b.size());
  for (std::size_t t = 0; t < sets_a.size(); ++t) {
    CHECK(sets_a[t] == sets_b[t]);
    CHECK(tree_a.merges[t].height ==
          doctest::Approx(tree_b.merges[t].height).epsilon(1e-9));
  }
}

TEST_CASE("cut_tree edge cases") {
  Rng rng(43);
  const auto pts = random_points(7, 2, rng);
  const auto tree = cluster::ward_linkage(from_rows(pts));
  SUBCASE("k=1 puts everything in one cluster") {
    const auto labels = cluster::cut_tree(tree, 1);
    for (int l : labels) CHECK(l == 1);
  }
  SUBCASE("k=n gives singletons") {
    const auto labels = cluster::cut_tree(tree, 7);
    std::set<int> distinct(labels.begin(), labels.end());
    CHECK(distinct.size() == 7);
  }
  SUBCASE("invalid k") {
    CHECK_THROWS_AS(cluster::cut_tree(tree, 0), InvalidK);
    CHECK_THROWS_AS(cluster::cut_tree(tree, 8), InvalidK);
  }
}

TEST_CASE("explained variance: exact endpoints and monotonicity") {
  Rng rng(47);
  const auto pts = random_points(15, 3, rng);
  const FeatureMatrix x = from_rows(pts);
  const auto tree = cluster::ward_linkage(x);
  const auto curve = cluster::explained_variance_curve(x, tree, 15);
  CHECK(curve.front().second == 0.0);  // k = 1, exactly
  CHECK(curve.back().second == 1.0);   // k = n, exactly
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].second >= curve[i - 1].second - 1e-12);
}

TEST_CASE("two well-separated blobs explain >= 0.9 variance at k=2") {
  Rng rng(53);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 20; ++i)
    pts.push_back({rng.normal(0.0, 0.5), rng.normal(0.0, 0.5)});
  for (int i = 0; i < 20; ++i)
    pts.push_back({rng.normal(20.0, 0.5), rng.normal(0.0, 0.5)});
  const FeatureMatrix x = from_rows(pts);
  const auto tree = cluster::ward_linkage(x);
  const auto curve = cluster::explained_variance_curve(x, tree, 6);
  CHECK(curve[1].second >= 0.9);                       // k=2
  CHECK(curve[2].second - curve[1].second < 0.05);     // marginal gain small
  CHECK(cluster::select_k_elbow(curve) == 2);
}

TEST_CASE("select_k_elbow: stated curve and tie rule") {
  SUBCASE("spec curve picks k=2") {
    const std::vector<std::pair<int, double>> curve = {
        {1, 0.0}, {2, 0.9}, {3, 0.92}, {4, 0.93}, {5, 1.0}};
    CHECK(cluster::select_k_elbow(curve) == 2);
  }
  SUBCASE("linear curve ties break to the smallest k") {
    const std::vector<std::pair<int, double>> curve = {
        {1, 0.0}, {2, 0.25}, {3, 0.5}, {4, 0.75}, {5, 1.0}};
    CHECK(cluster::select_k_elbow(curve) == 2);
  }
  SUBCASE("too-short curve") {
    const std::vector<std::pair<int, double>> curve = {{1, 0.0}, {2, 1.0}};
    CHECK_THROWS_AS(cluster::select_k_elbow(curve), CurveTooShort);
  }
}

TEST_CASE("silhouette: hand instances") {
  SUBCASE("{0,0} vs {10,10} scores 1") {
    const FeatureMatrix x = from_rows({{0.0}, {0.0}, {10.0}, {10.0}});
    CHECK(cluster::silhouette_score(x, {1, 1, 2, 2}) == doctest::Approx(1.0));
  }
  SUBCASE("4-point instance matches the brute-force oracle to 1e-12") {
    const std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {9.0}, {10.0}};
    const std::vector<int> labels = {1, 1, 2, 2};
    const double impl = cluster::silhouette_score(from_rows(pts), labels);
    const double oracle = oracles::naive_silhouette(pts, labels);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-12));
  }
  SUBCASE("single cluster is an error") {
    const FeatureMatrix x = from_rows({{0.0}, {1.0}});
    CHECK_THROWS_AS(cluster::silhouette_score(x, {1, 1}), SingleCluster);
  }
}

TEST_CASE("silhouette matches the O(n^2) oracle on 200 random instances") {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 46));  // n <= 50
    const int d = 1 + static_cast<int>(rng.uniform_int(0, 3));
    const int k = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const auto pts = random_points(n, d, rng);
    std::vector<int> labels(static_cast<std::size_t>(n));
    // ensure every cluster is non-empty
    for (int i = 0; i < n; ++i)
      labels[static_cast<std::size_t>(i)] =
          i < k ? i + 1 : 1 + static_cast<int>(rng.uniform_int(0, k - 1));
    const double impl = cluster::silhouette_score(from_rows(pts), labels);
    const double oracle = oracles::naive_silhouette(pts, labels);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("random labels on one blob give silhouette near zero") {
  Rng rng(61);
  std::vector<double> scores;
  for (int rep = 0; rep < 9; ++rep) {
    const auto pts = random_points(60, 3, rng);
    std::vector<int> labels(60);
    for (auto& l : labels) l = 1 + static_cast<int>(rng.uniform_int(0, 1));
    bool has1 = false, has2 = false;
    for (int l : labels) (l == 1 ? has1 : has2) = true;
    if (!has1 || !has2) continue;
    scores.push_back(cluster::silhouette_score(from_rows(pts), labels));
  }
  std::sort(scores.begin(), scores.end());
  const double median = scores[scores.size() / 2];
  CHECK(std::abs(median) < 0.1);
}

TEST_CASE("cluster_exemplars ordering") {
  SUBCASE("3-point 1D cluster {0,1,5}: order is {1,0,5} around centroid 2") {
    const FeatureMatrix x = from_rows({{0.0}, {1.0}, {5.0}});
    const auto ex = cluster::cluster_exemplars(x, {1, 1, 1}, 3);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0] == std::vector<int>{1, 0, 2});
  }
  SUBCASE("centroid member ranks first") {
    const FeatureMatrix x = from_rows({{0.0}, {2.0}, {4.0}});
    const auto ex = cluster::cluster_exemplars(x, {1, 1, 1}, 1);
    CHECK(ex[0] == std::vector<int>{1});
  }
  SUBCASE("identical points tie-break to the lowest index") {
    const FeatureMatrix x = from_rows({{3.0}, {3.0}, {3.0}});
    const auto ex = cluster::cluster_exemplars(x, {1, 1, 1}, 1);
    CHECK(ex[0] == std::vector<int>{0});
  }
  SUBCASE("m must be positive") {
    const FeatureMatrix x = from_rows({{0.0}});
    CHECK_THROWS_AS(cluster::cluster_exemplars(x, {1}, 0), InvalidM);
  }
}

TEST_CASE("adjusted rand index: identity, independence, label names") {
  const std::vector<int> a = {1, 1, 1, 2, 2, 2, 3, 3};
  CHECK(cluster::adjusted_rand_index(a, a) == doctest::Approx(1.0));
  const std::vector<int> renamed = {7, 7, 7, 5, 5, 5, 9, 9};
  CHECK(cluster::adjusted_rand_index(a, renamed) == doctest::Approx(1.0));

  Rng rng(67);
  double acc = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> u(60), v(60);
    for (auto& x : u) x = 1 + static_cast<int>(rng.uniform_int(0, 2));
    for (auto& x : v) x = 1 + static_cast<int>(rng.uniform_int(0, 2));
    acc += cluster::adjusted_rand_index(u, v);
  }
  CHECK(std::abs(acc / 50.0) < 0.05);  // near zero under independence
}

TEST_CASE("tsne: determinism, separation, and the perplexity precondition") {
  Rng rng(71);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 30; ++i)
    pts.push_back({rng.normal(0.0, 0.4), rng.normal(0.0, 0.4), rng.normal(0.0, 0.4)});
  for (int i = 0; i < 30; ++i)
    pts.push_back({rng.normal(12.0, 0.4), rng.normal(0.0, 0.4), rng.normal(0.0, 0.4)});
  const FeatureMatrix x = from_rows(pts);
  std::vector<int> planted(60, 1);
  std::fill(planted.begin() + 30, planted.end(), 2);

  cluster::TsneConfig cfg;
  cfg.perplexity = 10.0;
  cfg.iterations = 400;
  cfg.seed = 5;
  const auto y1 = cluster::tsne_embed(x, cfg);
  const auto y2 = cluster::tsne_embed(x, cfg);
  CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);

  FeatureMatrix emb(60, 2);
  emb = y1;
  CHECK(cluster::silhouette_score(emb, planted) > 0.5);

  SUBCASE("perplexity too large") {
    cluster::TsneConfig bad;
    bad.perplexity = 5.0;
    FeatureMatrix tiny = x.topRows(10);
    CHECK_THROWS_AS(cluster::tsne_embed(tiny, bad), PerplexityTooLarge);
  }
}

TEST_CASE("ward input validation") {
  FeatureMatrix one(1, 2);
  one << 1.0, 2.0;
  CHECK_THROWS_AS(cluster::ward_linkage(one), TooFewPoints);
  FeatureMatrix bad(2, 1);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cluster::ward_linkage(bad), NonFiniteFeature);
}
