#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "cogeval/pooling.hpp"
#include "cogeval/protocol.hpp"
#include "cogeval/synth.hpp"

namespace {

using namespace cogeval;
namespace fs = std::filesystem;

void BM_Pool(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 768;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  FeatureMatrix m(frames, dim);
  for (std::size_t r = 0; r < frames; ++r) {
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = nd(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(pool(m, PoolingKind::Mean));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * frames * dim * sizeof(double)));
}
BENCHMARK(BM_Pool)->Arg(449)->Arg(2999);

Corpus label_only_corpus(int per_class) {
  Corpus c;
  c.corpus_id = "B";
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < per_class; ++i) {
      SessionRecord s;
      s.speaker_id = "p" + std::to_string(k) + "_" + std::to_string(i);
      s.session_id = s.speaker_id + "_a";
      s.corpus_id = c.corpus_id;
      s.test_id = "sVFT";
      s.cognitive = k;
      c.sessions.push_back(s);
    }
  }
  return c;
}

void BM_MakeSplit(benchmark::State& state) {
  const Corpus c = label_only_corpus(static_cast<int>(state.range(0)));
  const auto sessions = c.sessions_for_test("sVFT");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(make_split(sessions, 5, seed++, Label::Cognitive));
}
BENCHMARK(BM_MakeSplit)->Arg(50)->Arg(500);

// Full nested cross-validation on a small synthetic corpus with the default grid.
void BM_WithinCorpus(benchmark::State& state) {
  const fs::path dir = fs::temp_directory_path() / ("cogeval_bench_" + std::to_string(std::random_device{}()));
  SynthSpec spec;
  spec.seed = 3;
  spec.speakers_per_class = {20, 20, 20};
  spec.separation = 1.0;
  const Corpus c = generate(spec, dir);
  ExperimentSpec e;
  e.test_id = "sVFT";
  e.feature_family = spec.feature_family;
  for (auto _ : state) {
    FeatureStore store;
    benchmark::DoNotOptimize(run_within(c, e, HyperGrid{}, store));
  }
  fs::remove_all(dir);
}
BENCHMARK(BM_WithinCorpus)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
