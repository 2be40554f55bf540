#pragma once

// Brute-force reference for the binary SVM dual, independent of the SMO
// code path: accelerated projected gradient ascent on
//   max e'a - 1/2 a'Qa  s.t. 0 <= a <= C, y'a = 0,
// with the projection computed by bisection on the equality multiplier.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cogeval::testing {

struct ReferenceDual {
  std::vector<double> alpha;
  double objective = 0.0;
  double bias = 0.0;
  std::size_t iterations = 0;
};

inline std::vector<double> project(const std::vector<double>& v, const std::vector<int>& y, double c) {
  const std::size_t n = v.size();
  const auto clipped = [&](double mu, std::size_t i) { return std::clamp(v[i] - mu * y[i], 0.0, c); };
  const auto g = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += y[i] * clipped(mu, i);
    return s;
  };
  double bound = c;
  for (double x : v) bound = std::max(bound, std::abs(x) + c);
  double lo = -bound, hi = bound;  // g(lo) >= 0 >= g(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = clipped(mu, i);
  return out;
}

inline double dual_objective(const std::vector<std::vector<double>>& q, const std::vector<double>& a) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lin += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * q[i][j] * a[j];
  }
  return lin - 0.5 * quad;
}

/// Maximal KKT violation m(a) - M(a), bounds detected with a small slack.
inline double kkt_gap(const std::vector<std::vector<double>>& q, const std::vector<int>& y, double c,
                      const std::vector<double>& a) {
  const double eps = 1e-12 * std::max(1.0, c);
  double up = -INFINITY, low = INFINITY;
  for (std::size_t t = 0; t < a.size(); ++t) {
    double g = -1.0;
    for (std::size_t j = 0; j < a.size(); ++j) g += q[t][j] * a[j];
    const double v = -y[t] * g;
    const bool below_c = a[t] < c - eps, above_0 = a[t] > eps;
    if (y[t] == 1 ? below_c : above_0) up = std::max(up, v);
    if (y[t] == 1 ? above_0 : below_c) low = std::min(low, v);
  }
  return up - low;
}

/// Bias from the KKT conditions: average over free vectors, else midpoint
/// of the feasible interval.
inline double kkt_bias(const std::vector<std::vector<double>>& q, const std::vector<int>& y, double c,
                       const std::vector<double>& a) {
  const double eps = 1e-9 * c;
  double sum_free = 0.0, ub = INFINITY, lb = -INFINITY;
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double g = -1.0;  // gradient of the minimisation form, Qa - e
    for (std::size_t j = 0; j < a.size(); ++j) g += q[i][j] * a[j];
    const double yg = y[i] * g;
    const bool at_upper = a[i] >= c - eps;
    const bool at_lower = a[i] <= eps;
    if (!at_upper && !at_lower) {
      sum_free += yg;
      ++n_free;
    } else if ((at_upper && y[i] == -1) || (at_lower && y[i] == 1)) {
      ub = std::min(ub, yg);
    } else {
      lb = std::max(lb, yg);
    }
  }
  return -(n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb));
}

/// `k` is the plain kernel matrix K(x_i, x_j).
inline ReferenceDual solve_reference_dual(const std::vector<std::vector<double>>& k, const std::vector<int>& y,
                                          double c, std::size_t max_iter = 400000) {
  const std::size_t n = y.size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) q[i][j] = y[i] * y[j] * k[i][j];
    trace += q[i][i];
  }
  const double step = 1.0 / std::max(trace, 1e-12);  // trace >= largest eigenvalue

  const auto grad = [&](const std::vector<double>& a) {
    std::vector<double> g(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) g[i] -= q[i][j] * a[j];
    }
    return g;
  };

  ReferenceDual out;
  std::vector<double> a(n, 0.0), prev = a, z = a;
  double t = 1.0;
  double best = dual_objective(q, a);
  for (std::size_t it = 0; it < max_iter; ++it) {
    const auto g = grad(z);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] + step * g[i];
    prev = a;
    a = project(v, y, c);
    const double obj = dual_objective(q, a);
    double move = 0.0;
    for (std::size_t i = 0; i < n; ++i) move = std::max(move, std::abs(a[i] - prev[i]));
    if (obj < best) {  // adaptive restart
      t = 1.0;
      z = a;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (std::size_t i = 0; i < n; ++i) z[i] = a[i] + ((t - 1.0) / t_next) * (a[i] - prev[i]);
      t = t_next;
    }
    best = std::max(best, obj);
    out.iterations = it + 1;
    if (move < 1e-15 * std::max(1.0, c) || (it % 64 == 0 && kkt_gap(q, y, c, a) < 1e-12)) break;
  }
  out.alpha = a;
  out.objective = dual_objective(q, a);

  out.bias = kkt_bias(q, y, c, a);
  return out;
}

}  // namespace cogeval::testing
