#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cogeval/feature_matrix.hpp"

namespace cogeval {

enum class KernelKind { Linear, Rbf };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel(std::string_view name);

struct KernelConfig {
  KernelKind kind = KernelKind::Linear;
  double gamma = 0.0;  ///< RBF width; ignored for LINEAR

  static KernelConfig linear() { return {KernelKind::Linear, 0.0}; }
  static KernelConfig rbf(double gamma) { return {KernelKind::Rbf, gamma}; }

  /// Throws PreconditionError if RBF with gamma <= 0.
  void validate() const;

  friend bool operator==(const KernelConfig& a, const KernelConfig& b) {
    return a.kind == b.kind && (a.kind == KernelKind::Linear || a.gamma == b.gamma);
  }
};

/// LINEAR: <a, b>.  RBF: exp(-gamma * |a - b|^2).
double kernel_eval(std::span<const double> a, std::span<const double> b, const KernelConfig& kernel);

/// Per-dimension z-score transform fitted on training data.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  ///< population std; 1 for (numerically) constant dimensions

  std::size_t dim() const noexcept { return mean.size(); }
  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;
  FeatureMatrix transform(const FeatureMatrix& x) const;
};

/// Requires at least two rows.
Standardizer fit_standardizer(const FeatureMatrix& x);

struct SmoOptions {
  /// Stop when the maximal KKT violation m(a) - M(a) drops below this.
  /// At 1e-3, near-constant RBF kernels stop a few updates in with the dual
  /// objective still off by about 4e-4 relative.
  double tolerance = 1e-6;
  /// Pair-update cap; exceeding it raises ConvergenceError.
  std::size_t max_updates = 1'000'000;
  /// Precompute the whole kernel matrix up to this many samples, else use a row cache.
  std::size_t full_kernel_limit = 4096;
  std::size_t cache_rows = 512;
  /// train_binary with C > 1 first solves C/10^m, ..., C/10 and seeds each
  /// solve with the previous multipliers rescaled. Large-C problems on
  /// overlapping classes need millions of updates from a cold start.
  bool continuation = true;
  /// Run conjugate gradient on the face of the current free set after this
  /// many pair updates (0 disables). Pair updates alone crawl when the free
  /// block is near singular, e.g. linear kernels with large C. The spacing
  /// grows while polishing gains less than the pair updates in between.
  std::size_t polish_interval = 20;
  /// No polish before this many pair updates per sample. Well-conditioned
  /// problems finish within a few sweeps, where polishing costs more than it saves.
  double polish_delay = 5.0;
  /// Check after every pair update that the dual objective did not decrease.
  bool verify_monotone =
#ifdef NDEBUG
      false;
#else
      true;
#endif
};

/// Raw solution of the binary soft-margin dual
///   max  sum(a) - 1/2 a' Q a,   Q_ij = y_i y_j K(x_i, x_j),
///   s.t. 0 <= a_i <= C,  sum(a_i y_i) = 0.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;             ///< f(x) = sum a_i y_i K(x_i, x) + bias
  double dual_objective = 0.0;   ///< value of the maximised dual
  double max_violation = 0.0;    ///< final m(a) - M(a)
  std::size_t updates = 0;
};

/// Sequential minimal optimisation with maximal-violating-pair working-set
/// selection; ties go to the lowest sample index.
/// `initial_alpha`, when given, must be dual feasible for `c`; the solver
/// starts from it instead of zero.
DualSolution solve_dual(const FeatureMatrix& x, std::span<const int> y, double c, const KernelConfig& kernel,
                        const SmoOptions& options = {}, std::span<const double> initial_alpha = {});

struct SvmBinaryModel {
  FeatureMatrix support_vectors;   ///< standardized space when owned by a multiclass model
  std::vector<double> dual_coefs;  ///< a_i * y_i for each support vector
  double bias = 0.0;
  KernelConfig kernel;
  double c = 1.0;
  std::pair<int, int> class_pair{1, -1};  ///< (label for y = +1, label for y = -1)
  double dual_objective = 0.0;
  std::size_t updates = 0;

  double decision(std::span<const double> x) const;
};

/// y must hold -1/+1 with both present. `updates` counts the whole
/// continuation path; the update cap applies to each solve separately.
SvmBinaryModel train_binary(const FeatureMatrix& x, std::span<const int> y, double c, const KernelConfig& kernel,
                            const SmoOptions& options = {});

/// One-vs-one model over classes {0, 1, 2}. Pair models exist only for
/// classes seen in training.
struct SvmMulticlassModel {
  Standardizer scaler;
  std::vector<SvmBinaryModel> binary_models;

  int predict(std::span<const double> x) const;
};

SvmMulticlassModel train_multiclass(const FeatureMatrix& x, std::span<const int> y, double c,
                                    const KernelConfig& kernel, const SmoOptions& options = {});

inline int predict(const SvmMulticlassModel& model, std::span<const double> x) { return model.predict(x); }

/// One-vs-one vote resolution: most votes; ties go to the largest summed
/// signed decision value, then to the smallest class index.
int resolve_vote(const std::array<int, 3>& votes, const std::array<double, 3>& decision_sums);

}  // namespace cogeval
