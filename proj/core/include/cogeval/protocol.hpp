#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogeval/corpus.hpp"
#include "cogeval/metrics.hpp"
#include "cogeval/pooling.hpp"
#include "cogeval/svm.hpp"

namespace cogeval {

using SessionList = std::vector<const SessionRecord*>;

/// Speakers are identified per corpus so that equal speaker ids in two
/// corpora never collide.
struct SpeakerKey {
  std::string corpus_id;
  std::string speaker_id;
  auto operator<=>(const SpeakerKey&) const = default;
};

/// Speaker-disjoint, label-stratified fold assignment.
struct SplitPlan {
  int k = 5;
  std::uint64_t seed = 0;
  std::map<SpeakerKey, int> assignment;

  int fold_of(const SessionRecord& s) const;
  /// Sessions of `sessions` whose speaker lies in / outside fold `fold`.
  SessionList test_part(const SessionList& sessions, int fold) const;
  SessionList train_part(const SessionList& sessions, int fold) const;
};

/// Per class, speakers are shuffled with a seeded generator and dealt
/// round-robin into k folds, starting at a seeded random fold; the deal
/// position carries over between classes.
/// Every class present needs at least k speakers; each speaker must carry a
/// single label.
SplitPlan make_split(const SessionList& sessions, int k, std::uint64_t seed, Label label);
SplitPlan make_split(const Corpus& corpus, std::string_view test_id, int k, std::uint64_t seed, Label label);

/// Thread-safe cache of pooled session vectors, loaded lazily from disk.
class FeatureStore {
 public:
  struct Options {
    /// Cache pooled vectors next to the source file as "<file>.<kind>.pooled" (EMB1).
    bool disk_cache = false;
  };

  FeatureStore() = default;
  explicit FeatureStore(Options options) : options_(options) {}

  std::shared_ptr<const std::vector<double>> pooled(const SessionRecord& session, const std::string& feature_set,
                                                    PoolingKind kind);

  /// Stacks pooled vectors of `sessions` into an n x D matrix.
  FeatureMatrix design_matrix(const SessionList& sessions, const std::string& feature_set, PoolingKind kind);

  std::size_t loads() const;

 private:
  Options options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const std::vector<double>>> cache_;
  std::size_t loads_ = 0;
};

enum class Protocol { Within, Cross, Mixed };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

struct Hyperparameters {
  KernelConfig kernel;
  double c = 1.0;
  std::optional<int> layer;
  std::string feature_set;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

std::string describe(const Hyperparameters& h);

struct HyperGrid {
  std::vector<KernelKind> kernels{KernelKind::Linear, KernelKind::Rbf};
  std::vector<double> c_values{1e-1, 1e0, 1e1, 1e2, 1e3};
  std::vector<double> gamma_values{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  /// Empty: detect "<family>.Lnn" feature sets in the corpus.
  std::vector<int> layers;

  /// Enumeration order: kernel (LINEAR first), layer ascending, C ascending,
  /// gamma ascending (RBF only).
  std::vector<Hyperparameters> enumerate(std::string_view family) const;
};

/// Feature-set name of a layered family: ("w2v2", 7) -> "w2v2.L07".
std::string layer_feature_set(std::string_view family, int layer);

/// Layers available for `family` in `corpus` ("<family>.Lnn" sets), ascending.
std::vector<int> detect_layers(const Corpus& corpus, std::string_view family);

struct ExperimentSpec {
  Protocol protocol = Protocol::Within;
  std::string train_corpus;
  std::string test_corpus;
  std::string test_id;
  std::string feature_family;
  Label target = Label::Cognitive;
  PoolingKind pooling = PoolingKind::Mean;
  int k = 5;
  std::uint64_t seed = 1;

  /// Checks protocol/corpus consistency; throws PreconditionError.
  void validate() const;
};

struct FoldResult {
  int fold = 0;
  ConfusionMatrix confusion;
  double uar = 0.0;
  Hyperparameters chosen;
  double inner_uar = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  HyperGrid grid;
  std::vector<std::string> corpora;
  std::vector<FoldResult> folds;  ///< ordered by fold index
  double mean_uar = 0.0;
  std::optional<double> std_uar;  ///< absent for CROSS
  std::map<std::string, int> predictions;  ///< session_id -> predicted class
};

struct RunOptions {
  /// Worker threads for grid evaluation; 0 = hardware concurrency.
  unsigned threads = 0;
  SmoOptions smo;
};

struct GridSearchOutcome {
  Hyperparameters best;
  double best_uar = 0.0;
  std::vector<double> scores;  ///< inner mean UAR per grid point, enumeration order
};

/// Inner stratified k-fold CV over `train` for every grid point; the first
/// maximiser in enumeration order wins.
GridSearchOutcome grid_search(const SessionList& train, const ExperimentSpec& spec, const HyperGrid& grid,
                              FeatureStore& store, std::uint64_t inner_seed, const RunOptions& options = {});

/// Trains on `train` with `h` and predicts every session of `test`.
std::vector<int> fit_and_predict(const SessionList& train, const SessionList& test, const Hyperparameters& h,
                                 const ExperimentSpec& spec, FeatureStore& store, const RunOptions& options = {});

/// Seed of the inner grid-search CV for outer fold `fold`.
inline std::uint64_t inner_seed(std::uint64_t seed, int fold) { return seed + 1000 + static_cast<std::uint64_t>(fold); }

/// Resolves an empty grid layer list against the corpora.
HyperGrid resolve_grid(HyperGrid grid, const ExperimentSpec& spec, std::span<const Corpus* const> corpora);

ExperimentResult run_within(const Corpus& corpus, const ExperimentSpec& spec, const HyperGrid& grid,
                            FeatureStore& store, const RunOptions& options = {});
ExperimentResult run_cross(const Corpus& train, const Corpus& test, const ExperimentSpec& spec,
                           const HyperGrid& grid, FeatureStore& store, const RunOptions& options = {});
ExperimentResult run_mixed(const Corpus& a, const Corpus& b, const ExperimentSpec& spec, const HyperGrid& grid,
                           FeatureStore& store, const RunOptions& options = {});

}  // namespace cogeval
