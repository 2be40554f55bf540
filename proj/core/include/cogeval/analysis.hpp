#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogeval/corpus.hpp"
#include "cogeval/metrics.hpp"
#include "cogeval/protocol.hpp"

namespace cogeval {

/// Which 3x3 cell every session landed in, plus the resulting counts.
struct CellAssignment {
  std::map<std::string, std::pair<int, int>> cells;  ///< session_id -> (row, col)
  ConfusionMatrix counts;

  void assign(const std::string& session_id, int row, int col);
  std::vector<std::string> members(int row, int col) const;
  CellAssignment transposed() const;
};

/// Ground-truth co-occurrence: rows = cognitive, columns = depression.
CellAssignment cooccurrence(std::span<const SessionRecord* const> sessions);
CellAssignment cooccurrence(const Corpus& corpus);

/// Predicted cognitive class against another ground truth: rows = `against`
/// label, columns = predicted class. Sessions lacking the `against` label
/// are skipped; labelled sessions without a prediction are an error.
CellAssignment cross_label_confusion(const std::map<std::string, int>& predictions,
                                     std::span<const SessionRecord* const> sessions,
                                     Label against = Label::Depression);

struct OverlapCell {
  std::int64_t shared = 0;           ///< sessions in this cell of both assignments
  std::int64_t reference_count = 0;  ///< size of the reference cell
  std::int64_t other_count = 0;
  std::optional<double> fraction;           ///< shared / reference_count
  std::optional<double> fraction_of_other;  ///< shared / other_count
};

using OverlapTable = std::array<std::array<OverlapCell, 3>, 3>;

/// Per-cell instance intersection of two assignments over the same
/// session universe; fractions are relative to `reference`.
OverlapTable cell_overlap(const CellAssignment& reference, const CellAssignment& other);

struct PartitionStats {
  std::vector<std::string> sessions;
  std::optional<double> depressed_fraction;   ///< share with depression > 0
  std::optional<double> above_mean_fraction;  ///< share with test_score above the mean
  std::optional<double> below_mean_fraction;
};

struct Breakdown {
  std::size_t analyzed = 0;      ///< predicted sessions found in the corpus
  std::size_t errors = 0;
  PartitionStats under;          ///< predicted class lower than ground truth
  PartitionStats over;           ///< predicted class higher than ground truth
  std::optional<double> score_mean;
  std::vector<std::string> warnings;
};

/// Splits the misclassified sessions of `result` that belong to `corpus`
/// into under- and over-classification and reports depression and
/// test-performance shares. Covariates that are missing are skipped with a
/// warning.
Breakdown misclassification_breakdown(const ExperimentResult& result, const Corpus& corpus);

}  // namespace cogeval
