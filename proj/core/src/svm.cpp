#include <algorithm>
#include <cmath>
#include <string>

#include "cogeval/errors.hpp"
#include "cogeval/svm.hpp"

namespace cogeval {

SvmBinaryModel train_binary(const FeatureMatrix& x, std::span<const int> y, double c, const KernelConfig& kernel,
                            const SmoOptions& options) {
  std::vector<double> rungs{c};
  if (options.continuation) {
    for (int k = 1; rungs.front() > 1.0; ++k) rungs.insert(rungs.begin(), c / std::pow(10.0, k));
  }
  DualSolution sol;
  std::size_t updates = 0;
  for (std::size_t r = 0; r < rungs.size(); ++r) {
    std::vector<double> seed;
    if (r > 0) {
      const double ratio = rungs[r] / rungs[r - 1];
      seed = sol.alpha;
      for (double& a : seed) a = std::min(a * ratio, rungs[r]);
    }
    sol = solve_dual(x, y, rungs[r], kernel, options, seed);
    updates += sol.updates;
  }

  SvmBinaryModel model;
  model.kernel = kernel;
  model.c = c;
  model.bias = sol.bias;
  model.dual_objective = sol.dual_objective;
  model.updates = updates;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (sol.alpha[i] > 0.0) {
      model.support_vectors.append_row(x.row(i));
      model.dual_coefs.push_back(sol.alpha[i] * y[i]);
    }
  }
  return model;
}

double SvmBinaryModel::decision(std::span<const double> x) const {
  double f = bias;
  for (std::size_t i = 0; i < dual_coefs.size(); ++i) {
    f += dual_coefs[i] * kernel_eval(support_vectors.row(i), x, kernel);
  }
  return f;
}

SvmMulticlassModel train_multiclass(const FeatureMatrix& x, std::span<const int> y, double c,
                                    const KernelConfig& kernel, const SmoOptions& options) {
  if (x.rows() != y.size()) {
    throw PreconditionError("sample/label count mismatch: " + std::to_string(x.rows()) + " vs " +
                            std::to_string(y.size()));
  }
  std::array<bool, 3> present{};
  for (int label : y) {
    if (label < 0 || label > 2) throw PreconditionError("class label out of range: " + std::to_string(label));
    present[static_cast<std::size_t>(label)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw PreconditionError("single-class input: multiclass SVM needs at least two classes");
  }

  SvmMulticlassModel model;
  model.scaler = fit_standardizer(x);
  const FeatureMatrix z = model.scaler.transform(x);

  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (!present[static_cast<std::size_t>(a)] || !present[static_cast<std::size_t>(b)]) continue;
      FeatureMatrix sub;
      std::vector<int> sub_y;
      for (std::size_t i = 0; i < z.rows(); ++i) {
        if (y[i] == a || y[i] == b) {
          sub.append_row(z.row(i));
          sub_y.push_back(y[i] == a ? 1 : -1);
        }
      }
      SvmBinaryModel m = train_binary(sub, sub_y, c, kernel, options);
      m.class_pair = {a, b};
      model.binary_models.push_back(std::move(m));
    }
  }
  return model;
}

int SvmMulticlassModel::predict(std::span<const double> x) const {
  if (x.size() != scaler.dim()) {
    throw PreconditionError("feature dimension mismatch: model expects " + std::to_string(scaler.dim()) +
                            ", got " + std::to_string(x.size()));
  }
  const std::vector<double> z = scaler.apply(x);
  std::array<int, 3> votes{};
  std::array<double, 3> sums{};
  for (const auto& m : binary_models) {
    const double f = m.decision(z);
    const auto [a, b] = m.class_pair;
    ++votes[static_cast<std::size_t>(f > 0.0 ? a : b)];
    sums[static_cast<std::size_t>(a)] += f;
    sums[static_cast<std::size_t>(b)] -= f;
  }
  return resolve_vote(votes, sums);
}

int resolve_vote(const std::array<int, 3>& votes, const std::array<double, 3>& decision_sums) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const auto bu = static_cast<std::size_t>(best);
    if (votes[ku] > votes[bu] || (votes[ku] == votes[bu] && decision_sums[ku] > decision_sums[bu])) best = k;
  }
  return best;
}

}  // namespace cogeval
