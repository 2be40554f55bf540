#include <cmath>
#include <string>

#include "cogeval/errors.hpp"
#include "cogeval/svm.hpp"

namespace cogeval {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::Linear ? "linear" : "rbf"; }

KernelKind parse_kernel(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "rbf") return KernelKind::Rbf;
  throw PreconditionError("unknown kernel '" + std::string(name) + "' (expected linear|rbf)");
}

void KernelConfig::validate() const {
  if (kind == KernelKind::Rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw PreconditionError("RBF kernel requires gamma > 0, got " + std::to_string(gamma));
  }
}

double kernel_eval(std::span<const double> a, std::span<const double> b, const KernelConfig& kernel) {
  if (a.size() != b.size()) {
    throw PreconditionError("kernel dimension mismatch: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  if (kernel.kind == KernelKind::Linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    dist2 += d * d;
  }
  return std::exp(-kernel.gamma * dist2);
}

Standardizer fit_standardizer(const FeatureMatrix& x) {
  if (x.rows() < 2) throw PreconditionError("standardizer needs at least 2 rows, got " + std::to_string(x.rows()));
  const std::size_t d = x.dim();
  const double n = static_cast<double>(x.rows());
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
  }
  for (double& m : s.mean) m /= n;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double dev = x(r, c) - s.mean[c];
      s.scale[c] += dev * dev;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(s.scale[c] / n);
    // Constant columns (up to rounding in the mean) keep unit scale.
    s.scale[c] = sd <= 1e-12 * std::max(1.0, std::abs(s.mean[c])) ? 1.0 : sd;
  }
  return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != dim() || out.size() != dim()) {
    throw PreconditionError("standardizer expects dim " + std::to_string(dim()) + ", got " +
                            std::to_string(in.size()));
  }
  for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean[c]) / scale[c];
}

std::vector<double> Standardizer::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

FeatureMatrix Standardizer::transform(const FeatureMatrix& x) const {
  FeatureMatrix out(x.rows(), x.dim());
  for (std::size_t r = 0; r < x.rows(); ++r) apply(x.row(r), out.row(r));
  return out;
}

}  // namespace cogeval
