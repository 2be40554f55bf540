#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cogeval/corpus.hpp"

namespace cogeval {

/// Class-dependent clinical test score: class_mean[label] + N(0, noise_sd).
struct TestScoreModel {
  std::array<double, 3> class_mean{25.0, 18.0, 11.0};
  double noise_sd = 3.0;
};

/// Gaussian class-cluster corpus. Frame vectors are the class mean plus
/// unit-variance noise, so pooled features separate at `separation` noise
/// standard deviations between any two class means.
struct SynthSpec {
  std::uint64_t seed = 1;
  std::string corpus_id = "SYN";
  std::vector<std::string> test_ids{"sVFT"};
  std::array<int, 3> speakers_per_class{20, 20, 20};
  std::size_t dim = 16;
  std::size_t min_frames = 20;
  std::size_t max_frames = 40;
  double separation = 5.0;
  /// Length of an additive offset along (1, ..., 1) / sqrt(dim) applied to every frame.
  double corpus_shift = 0.0;
  /// Joint (cognitive, depression) probabilities; depression is absent when unset.
  std::optional<std::array<std::array<double, 3>, 3>> cooccurrence_target;
  std::string feature_family = "emb";
  /// > 0: emit layered feature sets "<family>.L01" ... instead of one set.
  int layers = 0;
  /// With layers > 0, only this layer carries class signal (others carry none).
  std::optional<int> informative_layer;
  std::optional<TestScoreModel> test_score;

  /// Throws PreconditionError on inconsistent settings.
  void validate() const;
};

/// Planted class means (one dim-length vector per class); pairwise distance = separation.
std::vector<std::vector<double>> class_means(const SynthSpec& spec);

/// Writes `out_dir/manifest.jsonl` and EMB1 files under `out_dir/features`,
/// then loads the result back through load_manifest.
Corpus generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

/// Deterministic depression counts per cognitive class: largest-remainder
/// rounding of the conditional target row to the class size.
std::array<std::array<int, 3>, 3> allocate_cooccurrence(const std::array<std::array<double, 3>, 3>& target,
                                                        const std::array<int, 3>& class_sizes);

/// Shuffles cognitive labels among the sessions of each test. The label
/// multiset is kept; feature files are untouched.
Corpus permute_labels(const Corpus& corpus, std::uint64_t seed);

}  // namespace cogeval
