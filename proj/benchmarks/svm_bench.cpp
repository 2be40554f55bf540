#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cogeval/svm.hpp"

namespace {

using namespace cogeval;

struct Data {
  FeatureMatrix x;
  std::vector<int> y;
};

Data make_data(std::size_t n, std::size_t d, double shift, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Data out{FeatureMatrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int k = static_cast<int>(i % static_cast<std::size_t>(classes));
    out.y[i] = classes == 2 ? (k == 0 ? -1 : 1) : k;
    for (std::size_t j = 0; j < d; ++j) {
      out.x(i, j) = nd(rng) + (j == static_cast<std::size_t>(k) ? shift : 0.0);
    }
  }
  return out;
}

void BM_BinaryLinear(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double c = static_cast<double>(state.range(1));
  const Data d = make_data(n, 16, 1.0, 2, 11);
  const FeatureMatrix z = fit_standardizer(d.x).transform(d.x);
  for (auto _ : state) benchmark::DoNotOptimize(train_binary(z, d.y, c, KernelConfig::linear()));
}
BENCHMARK(BM_BinaryLinear)->ArgsProduct({{64, 128, 256, 512}, {1, 1000}})->Unit(benchmark::kMillisecond);

void BM_BinaryRbf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Data d = make_data(n, 16, 1.0, 2, 12);
  const FeatureMatrix z = fit_standardizer(d.x).transform(d.x);
  for (auto _ : state) benchmark::DoNotOptimize(train_binary(z, d.y, 10.0, KernelConfig::rbf(1.0 / 16)));
}
BENCHMARK(BM_BinaryRbf)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_MulticlassTrain(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)), 32, 1.5, 3, 13);
  for (auto _ : state) benchmark::DoNotOptimize(train_multiclass(d.x, d.y, 1.0, KernelConfig::linear()));
}
BENCHMARK(BM_MulticlassTrain)->Arg(90)->Arg(180)->Arg(360)->Unit(benchmark::kMillisecond);

void BM_MulticlassPredict(benchmark::State& state) {
  const Data d = make_data(180, 32, 1.5, 3, 14);
  const SvmMulticlassModel m = train_multiclass(d.x, d.y, 1.0, KernelConfig::rbf(1.0 / 32));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.predict(d.x.row(i)));
    i = (i + 1) % d.x.rows();
  }
}
BENCHMARK(BM_MulticlassPredict);

}  // namespace
