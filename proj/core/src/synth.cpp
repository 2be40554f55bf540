#include "cogeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "cogeval/errors.hpp"
#include "cogeval/feature_matrix.hpp"
#include "cogeval/protocol.hpp"
#include "detail/random.hpp"

namespace cogeval {

void SynthSpec::validate() const {
  if (dim == 0) throw PreconditionError("synth: dim must be positive");
  if (!(separation >= 0.0)) throw PreconditionError("synth: separation must be non-negative");
  if (min_frames == 0 || max_frames < min_frames) throw PreconditionError("synth: bad frame range");
  if (test_ids.empty()) throw PreconditionError("synth: no test ids");
  for (int n : speakers_per_class) {
    if (n < 0) throw PreconditionError("synth: negative speaker count");
  }
  if (layers < 0) throw PreconditionError("synth: negative layer count");
  if (informative_layer && (*informative_layer < 1 || *informative_layer > layers)) {
    throw PreconditionError("synth: informative layer outside 1.." + std::to_string(layers));
  }
  if (cooccurrence_target) {
    double total = 0.0;
    for (const auto& row : *cooccurrence_target) {
      for (double p : row) {
        if (p < 0.0) throw PreconditionError("synth: negative co-occurrence probability");
        total += p;
      }
    }
    if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("synth: co-occurrence probabilities must sum to 1");
  }
}

std::vector<std::vector<double>> class_means(const SynthSpec& spec) {
  const std::size_t d = spec.dim;
  const double s = spec.separation;
  std::vector<std::vector<double>> means(3, std::vector<double>(d, 0.0));
  if (d >= 3) {
    for (std::size_t c = 0; c < 3; ++c) means[c][c] = s / std::sqrt(2.0);
  } else if (d == 2) {
    means[1][0] = s;
    means[2][0] = s / 2.0;
    means[2][1] = s * std::sqrt(3.0) / 2.0;
  } else {
    means[1][0] = s;
    means[2][0] = 2.0 * s;  // on a line: neighbours at distance s
  }
  return means;
}

std::array<std::array<int, 3>, 3> allocate_cooccurrence(const std::array<std::array<double, 3>, 3>& target,
                                                        const std::array<int, 3>& class_sizes) {
  std::array<std::array<int, 3>, 3> counts{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double row_total = target[c][0] + target[c][1] + target[c][2];
    const int n = class_sizes[c];
    if (n == 0) continue;
    if (row_total <= 0.0) throw PreconditionError("synth: co-occurrence row " + std::to_string(c) + " is empty");
    std::array<double, 3> remainder{};
    int assigned = 0;
    for (std::size_t d = 0; d < 3; ++d) {
      const double exact = n * target[c][d] / row_total;
      // Snap values within rounding error of an integer before flooring.
      const double snapped = std::abs(exact - std::round(exact)) < 1e-9 ? std::round(exact) : exact;
      counts[c][d] = static_cast<int>(std::floor(snapped));
      remainder[d] = snapped - counts[c][d];
      assigned += counts[c][d];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[c][order[k % 3]];
  }
  return counts;
}

Corpus generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  const auto feature_dir = out_dir / "features";
  std::filesystem::create_directories(feature_dir);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto means = class_means(spec);
  const double shift_per_dim = spec.corpus_shift / std::sqrt(static_cast<double>(spec.dim));

  struct Speaker {
    std::string id;
    int cognitive;
    std::optional<int> depression;
  };
  std::vector<Speaker> speakers;
  std::array<std::vector<std::size_t>, 3> by_class;
  int next_id = 1;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < spec.speakers_per_class[static_cast<std::size_t>(c)]; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s_spk%03d", spec.corpus_id.c_str(), next_id++);
      by_class[static_cast<std::size_t>(c)].push_back(speakers.size());
      speakers.push_back({buf, c, std::nullopt});
    }
  }

  if (spec.cooccurrence_target) {
    const auto counts = allocate_cooccurrence(*spec.cooccurrence_target, spec.speakers_per_class);
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<int> levels;
      for (int d = 0; d < 3; ++d) levels.insert(levels.end(), static_cast<std::size_t>(counts[c][static_cast<std::size_t>(d)]), d);
      detail::shuffle(levels, rng);
      for (std::size_t k = 0; k < levels.size(); ++k) speakers[by_class[c][k]].depression = levels[k];
    }
  }

  std::vector<std::pair<std::string, bool>> feature_sets;  // name, carries class signal
  if (spec.layers > 0) {
    for (int l = 1; l <= spec.layers; ++l) {
      const bool informative = !spec.informative_layer || *spec.informative_layer == l;
      feature_sets.emplace_back(layer_feature_set(spec.feature_family, l), informative);
    }
  } else {
    feature_sets.emplace_back(spec.feature_family, true);
  }

  Corpus corpus;
  corpus.corpus_id = spec.corpus_id;
  for (const auto& test : spec.test_ids) {
    for (const auto& spk : speakers) {
      SessionRecord s;
      s.session_id = spk.id + "_" + test;
      s.speaker_id = spk.id;
      s.corpus_id = spec.corpus_id;
      s.test_id = test;
      s.cognitive = spk.cognitive;
      s.depression = spk.depression;
      if (spec.test_score) {
        s.test_score = spec.test_score->class_mean[static_cast<std::size_t>(spk.cognitive)] +
                       spec.test_score->noise_sd * noise(rng);
      }
      const auto frames = spec.min_frames + detail::bounded(rng, spec.max_frames - spec.min_frames + 1);
      for (const auto& [name, informative] : feature_sets) {
        FeatureMatrix m(frames, spec.dim);
        const auto& mean = means[static_cast<std::size_t>(spk.cognitive)];
        for (std::size_t r = 0; r < frames; ++r) {
          for (std::size_t c = 0; c < spec.dim; ++c) {
            m(r, c) = (informative ? mean[c] : 0.0) + shift_per_dim + noise(rng);
          }
        }
        const auto path = feature_dir / (s.session_id + "." + name + ".emb1");
        write_feature_matrix(path, m);
        s.features.emplace(name, path);
      }
      corpus.sessions.push_back(std::move(s));
    }
  }
  std::sort(corpus.sessions.begin(), corpus.sessions.end(),
            [](const SessionRecord& a, const SessionRecord& b) { return a.session_id < b.session_id; });
  for (const auto& [name, _] : feature_sets) corpus.feature_sets.push_back(name);
  std::sort(corpus.feature_sets.begin(), corpus.feature_sets.end());

  const auto manifest = out_dir / "manifest.jsonl";
  write_manifest(corpus, manifest);
  return load_manifest(manifest);
}

Corpus permute_labels(const Corpus& corpus, std::uint64_t seed) {
  Corpus out = corpus;
  std::mt19937_64 rng(seed);
  for (const auto& test : out.test_ids()) {
    std::vector<SessionRecord*> group;
    for (auto& s : out.sessions) {
      if (s.test_id == test) group.push_back(&s);
    }
    std::vector<int> labels;
    for (const auto* s : group) labels.push_back(s->cognitive);
    detail::shuffle(labels, rng);
    for (std::size_t i = 0; i < group.size(); ++i) group[i]->cognitive = labels[i];
  }
  return out;
}

}  // namespace cogeval
