#include "cogeval/pooling.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cogeval/errors.hpp"

namespace cogeval {

namespace {

constexpr std::size_t kPairwiseBlock = 16;

// Column sums over rows [lo, hi), accumulated into `out`.
void pairwise_sum(const FeatureMatrix& m, std::size_t lo, std::size_t hi, std::vector<double>& out) {
  if (hi - lo <= kPairwiseBlock) {
    for (std::size_t r = lo; r < hi; ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c];
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(out.size(), 0.0);
  pairwise_sum(m, lo, mid, out);
  pairwise_sum(m, mid, hi, right);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] += right[c];
}

}  // namespace

std::string_view to_string(PoolingKind kind) { return kind == PoolingKind::Mean ? "mean" : "sum"; }

PoolingKind parse_pooling(std::string_view name) {
  if (name == "mean") return PoolingKind::Mean;
  if (name == "sum") return PoolingKind::Sum;
  throw PreconditionError("unknown pooling '" + std::string(name) + "' (expected mean|sum)");
}

FeatureMatrix pool(const FeatureMatrix& matrix, PoolingKind kind) {
  if (matrix.rows() == 0) throw PreconditionError("cannot pool an empty feature matrix");
  if (matrix.rows() == 1) return matrix;

  std::vector<double> acc(matrix.dim(), 0.0);
  pairwise_sum(matrix, 0, matrix.rows(), acc);
  if (kind == PoolingKind::Mean) {
    const double n = static_cast<double>(matrix.rows());
    for (double& v : acc) v /= n;
  }
  return FeatureMatrix(1, matrix.dim(), std::move(acc));
}

long expected_frame_count(double duration_s) {
  if (!std::isfinite(duration_s) || duration_s <= 0.0) {
    throw PreconditionError("duration must be positive, got " + std::to_string(duration_s));
  }
  if (duration_s <= 0.02) {
    throw PreconditionError("duration " + std::to_string(duration_s) + " s is shorter than one 20 ms frame");
  }
  // T / 0.02 == T * 50; the nudge keeps exact multiples of 20 ms from
  // rounding down (2.3 * 50 evaluates to 114.99999999999999).
  const double frames = std::floor(duration_s * 50.0 + 1e-9);
  return static_cast<long>(frames) - 1;
}

}  // namespace cogeval
