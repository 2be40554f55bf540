#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogeval {

inline constexpr int kNumClasses = 3;

/// Which ground-truth labelling of a session to use.
enum class Label {
  Cognitive,   ///< 0 = HC, 1 = MCI, 2 = DEM
  Depression,  ///< 0 = none, 1 = mild, 2 = moderate-to-severe
};

std::string_view to_string(Label label);
Label parse_label(std::string_view name);

using ClassCounts = std::array<std::size_t, kNumClasses>;

/// One recorded test administration.
struct SessionRecord {
  std::string session_id;
  std::string speaker_id;
  std::string corpus_id;
  std::string test_id;
  int cognitive = 0;
  std::optional<int> depression;
  std::optional<double> test_score;
  /// Feature-set name -> resolved feature file path.
  std::map<std::string, std::filesystem::path> features;

  std::optional<int> label(Label which) const {
    return which == Label::Cognitive ? std::optional<int>(cognitive) : depression;
  }
};

/// A validated embedding dataset. Immutable after load; safe to share
/// between concurrent readers.
struct Corpus {
  std::string corpus_id;
  std::vector<SessionRecord> sessions;  ///< ordered by session_id
  std::vector<std::string> feature_sets;  ///< sorted

  const SessionRecord* find(std::string_view session_id) const;
  bool has_feature_set(std::string_view name) const;
  std::vector<const SessionRecord*> sessions_for_test(std::string_view test_id) const;
  std::vector<std::string> test_ids() const;
};

struct LoadOptions {
  /// Parse every referenced feature file during validation (not only check existence).
  bool parse_features = true;
};

/// Loads a JSON-Lines manifest. Feature paths are resolved against the
/// manifest's directory. Throws ParseError (with line number) or
/// ValidationError.
Corpus load_manifest(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes `corpus` as a manifest; feature paths are written relative to
/// the manifest's directory when possible.
void write_manifest(const Corpus& corpus, const std::filesystem::path& path);

/// Checks the Corpus invariants (unique ids, label ranges, feature-set coverage, one corpus_id).
void validate_corpus(const Corpus& corpus, const LoadOptions& options = {});

/// Per-class counts. Throws ValidationError listing sessions missing the label.
ClassCounts class_counts(std::span<const SessionRecord* const> sessions, Label label);
ClassCounts class_counts(const Corpus& corpus, Label label);

}  // namespace cogeval
