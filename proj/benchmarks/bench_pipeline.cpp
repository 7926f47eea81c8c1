#include <benchmark/benchmark.h>

#include "thermofoot/assoc/stat_tests.hpp"
#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/nn/layers.hpp"
#include "thermofoot/repr/convae.hpp"
#include "thermofoot/rng.hpp"
#include "thermofoot/seg/staple.hpp"
#include "thermofoot/synth/generator.hpp"

using namespace thermo;

namespace {

nn::Tensor random_tensor(std::vector<int> shape, std::uint64_t seed) {
  Rng rng(seed);
  nn::Tensor t(std::move(shape));
  for (auto& v : t.data) v = static_cast<float>(rng.normal());
  return t;
}

}  // namespace

static void ConvForward224(benchmark::State& state) {
  nn::Conv2d conv(3, 16, 3, 2, 1, "bench");
  Rng rng(1);
  conv.init_weights(rng);
  const nn::Tensor x = random_tensor({3, 224, 224}, 2);
  for (auto _ : state) {
    nn::Tensor y = conv.forward(x);
    benchmark::DoNotOptimize(y.data.data());
  }
}
BENCHMARK(ConvForward224);

static void ConvAeEncode(benchmark::State& state) {
  repr::ConvAE model;
  const nn::Tensor x = random_tensor({3, 224, 224}, 3);
  for (auto _ : state) {
    auto rep = model.encode(x);
    benchmark::DoNotOptimize(rep.values.data.data());
  }
}
BENCHMARK(ConvAeEncode);

static void StapleConsensus64(benchmark::State& state) {
  Rng rng(5);
  std::vector<BinaryMask> masks;
  for (int j = 0; j < 3; ++j) {
    BinaryMask m;
    m.height = m.width = 64;
    m.values.resize(64 * 64);
    for (auto& v : m.values) v = rng.bernoulli(0.4) ? 1 : 0;
    masks.push_back(std::move(m));
  }
  for (auto _ : state) {
    auto res = seg::staple_consensus(masks);
    benchmark::DoNotOptimize(res.probability.data());
  }
}
BENCHMARK(StapleConsensus64);

static void WardLinkage(benchmark::State& state) {
  Rng rng(7);
  const int n = static_cast<int>(state.range(0));
  cluster::FeatureMatrix x(n, 64);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 64; ++j) x(i, j) = rng.normal();
  for (auto _ : state) {
    auto tree = cluster::ward_linkage(x);
    benchmark::DoNotOptimize(tree.merges.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(WardLinkage)->Arg(100)->Arg(200)->Arg(300)->Complexity();

static void MannWhitneyExact(benchmark::State& state) {
  Rng rng(9);
  std::vector<double> g1, g2;
  for (int i = 0; i < 10; ++i) g1.push_back(rng.uniform_int(0, 8));
  for (int i = 0; i < 10; ++i) g2.push_back(rng.uniform_int(0, 8));
  for (auto _ : state) {
    auto out = assoc::mann_whitney_test(g1, g2);
    benchmark::DoNotOptimize(out.p_value);
  }
}
BENCHMARK(MannWhitneyExact);

static void SilhouetteScore(benchmark::State& state) {
  Rng rng(11);
  const int n = 282;
  cluster::FeatureMatrix x(n, 128);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = 1 + (i % 2);
    for (int j = 0; j < 128; ++j) x(i, j) = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cluster::silhouette_score(x, labels));
  }
}
BENCHMARK(SilhouetteScore);

static void GenerateFootPair(benchmark::State& state) {
  synth::FootPairParams params;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto [pair, mask] = synth::generate_foot_pair(params, seed++);
    benchmark::DoNotOptimize(pair.thermal.values.data());
  }
}
BENCHMARK(GenerateFootPair);

BENCHMARK_MAIN();
