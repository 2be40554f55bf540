#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace cogeval {

/// 3x3 count table; rows are ground truth, columns are predictions. Also
/// used for label co-occurrence tables.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, 3>, 3> counts{};

  std::int64_t row_sum(int r) const;
  std::int64_t col_sum(int c) const;
  std::int64_t total() const;
  std::int64_t diagonal() const;
  /// Recall of class `c`; empty when the class has no ground-truth rows.
  std::optional<double> recall(int c) const;
  ConfusionMatrix transposed() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred);

/// Mean per-class recall over classes present in the ground truth.
/// Throws PreconditionError when the matrix is empty.
double uar(const ConfusionMatrix& m);

struct UarSummary {
  double mean = 0.0;
  std::optional<double> stddev;  ///< sample std (divisor n - 1); absent for n < 2
};

UarSummary summarize(std::span<const double> values);

/// `fraction` as a percentage with one decimal, rounded half away from zero
/// on the shortest decimal representation of the value.
std::string format_percent(double fraction);

/// Report cell: "61.7±9.1", or "51.1" when there is no spread.
std::string format_cell(double mean, std::optional<double> stddev);

}  // namespace cogeval
