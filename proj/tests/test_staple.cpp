#include <doctest.h>

#include <algorithm>

#include "oracles/oracles.hpp"
#include "thermofoot/errors.hpp"
#include "thermofoot/rng.hpp"
#include "thermofoot/seg/staple.hpp"

using namespace thermo;

namespace {

BinaryMask make_mask(int h, int w, const std::vector<int>& values) {
  BinaryMask m;
  m.height = h;
  m.width = w;
  m.values.assign(values.begin(), values.end());
  return m;
}

BinaryMask random_mask(int h, int w, Rng& rng, double fg = 0.4) {
  BinaryMask m;
  m.height = h;
  m.width = w;
  m.values.resize(static_cast<std::size_t>(h) * w);
  for (auto& v : m.values) v = rng.bernoulli(fg) ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("two identical raters: consensus equals input, p and q near 1") {
  Rng rng(3);
  const BinaryMask m = random_mask(12, 10, rng);
  const auto res = seg::staple_consensus({m, m});
  CHECK(res.consensus.values == m.values);
  for (const auto& r : res.raters) {
    CHECK(r.p > 1.0 - 1e-5);
    CHECK(r.q > 1.0 - 1e-5);
  }
}

TEST_CASE("complementary raters with prior 0.5 stay at the prior") {
  BinaryMask all_fg = make_mask(4, 4, std::vector<int>(16, 1));
  BinaryMask all_bg = make_mask(4, 4, std::vector<int>(16, 0));
  const auto res = seg::staple_consensus({all_fg, all_bg}, 0.5);
  for (double w : res.probability) CHECK(w == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("consensus matches the brute-force EM oracle on small instances") {
  // The spec's named instance: three 8x8 masks with one dissenting pixel.
  std::vector<int> base(64, 0);
  for (int r = 2; r < 6; ++r)
    for (int c = 2; c < 6; ++c) base[r * 8 + c] = 1;
  std::vector<int> dissent = base;
  dissent[3 * 8 + 3] = 0;
  const std::vector<BinaryMask> masks = {make_mask(8, 8, base), make_mask(8, 8, base),
                                         make_mask(8, 8, dissent)};
  double prior = 0.0;
  for (const auto& m : masks)
    prior += static_cast<double>(m.count()) / static_cast<double>(m.values.size());
  prior /= static_cast<double>(masks.size());

  const auto res = seg::staple_consensus(masks, std::nullopt, 1e-12, 10000);
  std::vector<std::vector<int>> oracle_masks = {base, base, dissent};
  const auto oracle = oracles::staple_em(oracle_masks, prior);
  REQUIRE(res.probability.size() == oracle.weights.size());
  for (std::size_t i = 0; i < res.probability.size(); ++i)
    CHECK(res.probability[i] ==
          doctest::Approx(static_cast<double>(oracle.weights[i])).epsilon(1e-9));
}

TEST_CASE("oracle agreement over random small instances") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int h = 4 + static_cast<int>(rng.uniform_int(0, 4));
    const int w = 4 + static_cast<int>(rng.uniform_int(0, 4));
    const int r = 2 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<BinaryMask> masks;
    std::vector<std::vector<int>> raw;
    for (int j = 0; j < r; ++j) {
      BinaryMask m = random_mask(h, w, rng, 0.3 + 0.1 * j);
      raw.emplace_back(m.values.begin(), m.values.end());
      masks.push_back(std::move(m));
    }
    double prior = 0.0;
    for (const auto& m : masks)
      prior += static_cast<double>(m.count()) / static_cast<double>(m.values.size());
    prior /= static_cast<double>(masks.size());
    if (prior < 1e-6 || prior > 1.0 - 1e-6) continue;

    const auto res = seg::staple_consensus(masks, std::nullopt, 1e-12, 20000);
    const auto oracle = oracles::staple_em(raw, prior);
    for (std::size_t i = 0; i < res.probability.size(); ++i)
      CHECK(res.probability[i] ==
            doctest::Approx(static_cast<double>(oracle.weights[i])).epsilon(1e-7));
  }
}

TEST_CASE("log-likelihood is non-decreasing across EM iterations") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<BinaryMask> masks;
    for (int j = 0; j < 3; ++j) masks.push_back(random_mask(10, 10, rng));
    const auto res = seg::staple_consensus(masks);
    for (std::size_t i = 1; i < res.log_likelihood.size(); ++i)
      CHECK(res.log_likelihood[i] >= res.log_likelihood[i - 1] - 1e-9);
  }
}

TEST_CASE("consensus is invariant to rater order") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BinaryMask> masks;
    for (int j = 0; j < 4; ++j) masks.push_back(random_mask(9, 7, rng, 0.35));
    auto shuffled = masks;
    std::reverse(shuffled.begin(), shuffled.end());
    const auto a = seg::staple_consensus(masks);
    const auto b = seg::staple_consensus(shuffled);
    for (std::size_t i = 0; i < a.probability.size(); ++i)
      CHECK(a.probability[i] == doctest::Approx(b.probability[i]).epsilon(1e-12));
    CHECK(a.raters[0].p == doctest::Approx(b.raters[3].p).epsilon(1e-12));
    CHECK(a.raters[0].q == doctest::Approx(b.raters[3].q).epsilon(1e-12));
  }
}

TEST_CASE("input validation") {
  BinaryMask m = make_mask(2, 2, {0, 1, 1, 0});
  SUBCASE("fewer than two raters") {
    CHECK_THROWS_AS(seg::staple_consensus({m}), NonBinaryInput);
  }
  SUBCASE("dimension mismatch") {
    BinaryMask other = make_mask(2, 3, {0, 1, 1, 0, 0, 0});
    CHECK_THROWS_AS(seg::staple_consensus({m, other}), DimensionMismatch);
  }
  SUBCASE("non-binary values") {
    BinaryMask bad = m;
    bad.values[0] = 7;
    CHECK_THROWS_AS(seg::staple_consensus({m, bad}), NonBinaryInput);
  }
}
