// Test-only reference implementations, written independently of the library
// code paths they check. Brute force over clarity over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// STAPLE: direct EM fixed-point iteration in long double, run to a tight
// tolerance. masks[r][i] in {0,1}; prior is the foreground probability.
struct StapleOracleResult {
  std::vector<long double> weights;
  std::vector<long double> p, q;
  std::vector<long double> log_likelihood;
};

inline StapleOracleResult staple_em(const std::vector<std::vector<int>>& masks,
                                    long double prior, int iters = 10000,
                                    long double tol = 1e-12L) {
  const std::size_t r = masks.size();
  const std::size_t n = masks[0].size();
  StapleOracleResult res;
  res.p.assign(r, 0.99L);
  res.q.assign(r, 0.99L);
  res.weights.assign(n, prior);
  const long double clamp_eps = 1e-6L;

  for (int it = 0; it < iters; ++it) {
    std::vector<long double> w_new(n);
    long double ll = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      long double a = prior, b = 1.0L - prior;
      for (std::size_t j = 0; j < r; ++j) {
        if (masks[j][i]) {
          a *= res.p[j];
          b *= 1.0L - res.q[j];
        } else {
          a *= 1.0L - res.p[j];
          b *= res.q[j];
        }
      }
      w_new[i] = a / (a + b);
      ll += std::log(static_cast<double>(a + b));
    }
    res.log_likelihood.push_back(ll);
    long double change = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      change = std::max(change, std::abs(w_new[i] - res.weights[i]));
    res.weights = w_new;

    long double wsum = 0.0L;
    for (auto v : res.weights) wsum += v;
    const long double csum = static_cast<long double>(n) - wsum;
    for (std::size_t j = 0; j < r; ++j) {
      long double fg = 0.0L, bg = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        if (masks[j][i]) fg += res.weights[i];
        else bg += 1.0L - res.weights[i];
      }
      res.p[j] = wsum > 0.0L ? fg / wsum : 0.5L;
      res.q[j] = csum > 0.0L ? bg / csum : 0.5L;
      res.p[j] = std::min(1.0L - clamp_eps, std::max(clamp_eps, res.p[j]));
      res.q[j] = std::min(1.0L - clamp_eps, std::max(clamp_eps, res.q[j]));
    }
    if (change < tol && it > 0) break;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exact Mann-Whitney two-sided p by recursive subset enumeration. Computes
// the U statistic from pairwise comparisons (half credit for ties), which is
// an independent route from the rank-sum formula.
inline double mw_u_pairwise(const std::vector<double>& g1,
                            const std::vector<double>& g2) {
  double u = 0.0;
  for (double x : g1)
    for (double y : g2) {
      if (x > y) u += 1.0;
      else if (x == y) u += 0.5;
    }
  return u;
}

inline double mw_exact_p_enum(const std::vector<double>& g1,
                              const std::vector<double>& g2) {
  std::vector<double> pooled = g1;
  pooled.insert(pooled.end(), g2.begin(), g2.end());
  const int n = static_cast<int>(pooled.size());
  const int n1 = static_cast<int>(g1.size());
  const double u_obs = mw_u_pairwise(g1, g2);

  long long total = 0, le = 0, ge = 0;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == n1) {
      std::vector<double> a, b;
      std::vector<bool> in(n, false);
      for (int idx : pick) in[idx] = true;
      for (int i = 0; i < n; ++i) (in[i] ? a : b).push_back(pooled[i]);
      const double u = mw_u_pairwise(a, b);
      ++total;
      if (u <= u_obs + 1e-9) ++le;
      if (u >= u_obs - 1e-9) ++ge;
      return;
    }
    for (int i = start; i < n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  const double p = 2.0 * std::min(static_cast<double>(le) / total,
                                  static_cast<double>(ge) / total);
  return std::min(1.0, p);
}

// ---------------------------------------------------------------------------
// Fisher exact two-sided p with exact 128-bit integer table counts,
// summing P(table) <= P(observed) over all tables with the same margins.
inline long double choose_ld(long long n, long long k) {
  if (k < 0 || k > n) return 0.0L;
  long double v = 1.0L;
  for (long long i = 0; i < k; ++i)
    v = v * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
  return v;
}

inline double fisher_exact_p_enum(long long a, long long b, long long c,
                                  long long d) {
  const long long r1 = a + b, r2 = c + d, c1 = a + c, n = a + b + c + d;
  const long double denom = choose_ld(n, c1);
  auto pmf = [&](long long x) {
    return choose_ld(r1, x) * choose_ld(r2, c1 - x) / denom;
  };
  const long double p_obs = pmf(a);
  long double p = 0.0L;
  for (long long x = std::max(0LL, c1 - r2); x <= std::min(r1, c1); ++x) {
    const long double px = pmf(x);
    if (px <= p_obs * (1.0L + 1e-9L)) p += px;
  }
  return static_cast<double>(std::min(1.0L, p));
}

// ---------------------------------------------------------------------------
// Silhouette, straight from the definition, one point at a time.
inline double naive_silhouette(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& labels) {
  const std::size_t n = x.size();
  auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < x[i].size(); ++k) {
      const double d = x[i][k] - x[j][k];
      s += d * d;
    }
    return std::sqrt(s);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t own = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) ++own;
    if (own == 0) continue;  // singleton scores 0
    double a = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) a += dist(i, j);
    a /= static_cast<double>(own);
    double b = std::numeric_limits<double>::infinity();
    std::set<int> other_labels;
    for (std::size_t j = 0; j < n; ++j)
      if (labels[j] != labels[i]) other_labels.insert(labels[j]);
    for (int lab : other_labels) {
      double s = 0.0;
      std::size_t cnt = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (labels[j] == lab) {
          s += dist(i, j);
          ++cnt;
        }
      b = std::min(b, s / static_cast<double>(cnt));
    }
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Exhaustive Ward agglomeration: at each step evaluate the exact SSE increase
// of every candidate merge from the raw points and take the minimum (ties by
// lowest node-id pair). Returns the merge sequence as leaf sets plus heights
// in the sqrt(2*deltaSSE) convention.
struct WardOracleMerge {
  std::set<int> left, right;
  double height;
};

inline double sse_of(const std::vector<std::vector<double>>& x,
                     const std::set<int>& members) {
  const std::size_t d = x[0].size();
  std::vector<double> mean(d, 0.0);
  for (int i : members)
    for (std::size_t k = 0; k < d; ++k) mean[k] += x[static_cast<std::size_t>(i)][k];
  for (auto& v : mean) v /= static_cast<double>(members.size());
  double sse = 0.0;
  for (int i : members)
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = x[static_cast<std::size_t>(i)][k] - mean[k];
      sse += diff * diff;
    }
  return sse;
}

inline std::vector<WardOracleMerge> exhaustive_ward(
    const std::vector<std::vector<double>>& x) {
  const int n = static_cast<int>(x.size());
  struct Cluster {
    std::set<int> members;
    int node_id;
  };
  std::vector<Cluster> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({{i}, i});
  int next_id = n;
  std::vector<WardOracleMerge> merges;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    int best_a = 0, best_b = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        std::set<int> merged = clusters[i].members;
        merged.insert(clusters[j].members.begin(), clusters[j].members.end());
        const double cost = sse_of(x, merged) - sse_of(x, clusters[i].members) -
                            sse_of(x, clusters[j].members);
        const int a = std::min(clusters[i].node_id, clusters[j].node_id);
        const int b = std::max(clusters[i].node_id, clusters[j].node_id);
        bool better = cost < best - 1e-12;
        if (!better && std::abs(cost - best) <= 1e-12) {
          const int ca = std::min(clusters[bi].node_id, clusters[bj].node_id);
          const int cb = std::max(clusters[bi].node_id, clusters[bj].node_id);
          better = a < ca || (a == ca && b < cb);
        }
        if (better) {
          best = cost;
          bi = i;
          bj = j;
          best_a = a;
          best_b = b;
        }
      }
    }
    (void)best_a;
    (void)best_b;
    WardOracleMerge m;
    m.left = clusters[bi].members;
    m.right = clusters[bj].members;
    m.height = std::sqrt(std::max(0.0, 2.0 * best));
    merges.push_back(m);
    clusters[bi].members.insert(clusters[bj].members.begin(),
                                clusters[bj].members.end());
    clusters[bi].node_id = next_id++;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return merges;
}

// ---------------------------------------------------------------------------
// AUC from the pairwise-comparison definition with half credit for ties.
inline double naive_auc(const std::vector<double>& scores,
                        const std::vector<int>& labels) {
  double num = 0.0;
  long long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) num += 1.0;
      else if (scores[i] == scores[j]) num += 0.5;
    }
  }
  return num / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distance to Uniform(0,1).
inline double ks_to_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(p[i] - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - p[i]));
  }
  return d;
}

}  // namespace oracles
