#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <string>

#include "cogeval/errors.hpp"
#include "cogeval/svm.hpp"

namespace cogeval {

namespace {

// Rows of Q_ij = y_i y_j K(x_i, x_j): fully materialised for small problems,
// otherwise computed on demand behind an LRU row cache.
class QMatrix {
 public:
  QMatrix(const FeatureMatrix& x, std::span<const int> y, const KernelConfig& kernel, const SmoOptions& options)
      : x_(x), y_(y), kernel_(kernel), n_(x.rows()), diag_(n_) {
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_eval(x_.row(i), x_.row(i), kernel_);
    if (n_ <= options.full_kernel_limit) {
      full_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        full_[i * n_ + i] = diag_[i];
        for (std::size_t j = i + 1; j < n_; ++j) {
          const double q = y_[i] * y_[j] * kernel_eval(x_.row(i), x_.row(j), kernel_);
          full_[i * n_ + j] = q;
          full_[j * n_ + i] = q;
        }
      }
    } else {
      capacity_ = std::max<std::size_t>(options.cache_rows, 2);
      slot_of_.assign(n_, kNoSlot);
    }
  }

  double diag(std::size_t i) const { return diag_[i]; }

  std::span<const double> row(std::size_t i) {
    if (!full_.empty()) return {full_.data() + i * n_, n_};

    if (slot_of_[i] != kNoSlot) {
      lru_.splice(lru_.begin(), lru_, where_[slot_of_[i]]);
      return rows_[slot_of_[i]];
    }
    std::size_t slot;
    if (rows_.size() < capacity_) {
      slot = rows_.size();
      rows_.emplace_back(n_);
      where_.push_back(lru_.end());
    } else {
      slot = lru_.back();
      lru_.pop_back();
      slot_of_[owner_[slot]] = kNoSlot;
    }
    if (owner_.size() <= slot) owner_.resize(slot + 1);
    owner_[slot] = i;
    slot_of_[i] = slot;
    lru_.push_front(slot);
    where_[slot] = lru_.begin();
    auto& r = rows_[slot];
    for (std::size_t j = 0; j < n_; ++j) r[j] = y_[i] * y_[j] * kernel_eval(x_.row(i), x_.row(j), kernel_);
    return r;
  }

 private:
  static constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

  const FeatureMatrix& x_;
  std::span<const int> y_;
  KernelConfig kernel_;
  std::size_t n_;
  std::vector<double> diag_;
  std::vector<double> full_;

  std::size_t capacity_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> slot_of_;
  std::list<std::size_t> lru_;
  std::vector<std::list<std::size_t>::iterator> where_;
};

constexpr double kTau = 1e-12;

void check_inputs(const FeatureMatrix& x, std::span<const int> y, double c, const KernelConfig& kernel) {
  kernel.validate();
  if (!(c > 0.0 && std::isfinite(c))) throw PreconditionError("C must be positive, got " + std::to_string(c));
  if (x.rows() != y.size()) {
    throw PreconditionError("sample/label count mismatch: " + std::to_string(x.rows()) + " vs " +
                            std::to_string(y.size()));
  }
  if (x.rows() < 2) throw PreconditionError("binary SVM needs at least 2 samples");
  bool pos = false, neg = false;
  for (int label : y) {
    if (label == 1) pos = true;
    else if (label == -1) neg = true;
    else throw PreconditionError("binary labels must be -1 or +1, got " + std::to_string(label));
  }
  if (!pos || !neg) throw PreconditionError("single-class input: binary SVM needs both classes");
}

struct PolishResult {
  double change = 0.0;   // of the minimisation objective, never positive
  std::size_t rows = 0;  // kernel rows accumulated, the cost measure
};

// Conjugate gradient on the face fixed by the current free set: bounded
// multipliers stay put and steps keep y'a constant. When a free multiplier
// reaches a bound it leaves the set and CG restarts on the smaller face.
PolishResult polish_free_set(QMatrix& q, std::span<const int> y, double c, double tolerance,
                             std::vector<double>& alpha, std::vector<double>& grad) {
  const std::size_t n = alpha.size();
  std::vector<std::size_t> free;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < c) free.push_back(t);
  }
  const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  };

  PolishResult out;
  std::vector<double> u(n);
  std::size_t budget = 2 * free.size();
  while (free.size() >= 2 && budget > 0) {
    const std::size_t m = free.size();
    // Negative gradient on the face, projected onto y_F' d = 0.
    const auto residual = [&] {
      std::vector<double> r(m);
      double proj = 0.0;
      for (std::size_t f = 0; f < m; ++f) proj += y[free[f]] * grad[free[f]];
      proj /= static_cast<double>(m);
      for (std::size_t f = 0; f < m; ++f) r[f] = -(grad[free[f]] - y[free[f]] * proj);
      return r;
    };

    std::vector<double> r = residual();
    std::vector<double> d = r;
    double rr = dot(r, r);
    std::size_t blocked = m;
    // Residual entries below the KKT tolerance no longer matter to the caller.
    const double stop = 0.01 * tolerance * tolerance;
    for (std::size_t it = 0; it < m && budget > 0 && rr > stop; ++it, --budget) {
      // The residual comes from large, nearly cancelling gradients; project
      // the direction itself so rounding there cannot leak into y'a.
      double yd = 0.0;
      for (std::size_t f = 0; f < m; ++f) yd += y[free[f]] * d[f];
      yd /= static_cast<double>(m);
      for (std::size_t f = 0; f < m; ++f) d[f] -= y[free[f]] * yd;
      std::fill(u.begin(), u.end(), 0.0);
      for (std::size_t f = 0; f < m; ++f) {
        if (d[f] == 0.0) continue;
        const auto row = q.row(free[f]);
        for (std::size_t t = 0; t < n; ++t) u[t] += d[f] * row[t];
        ++out.rows;
      }
      double curvature = 0.0, slope = 0.0;
      for (std::size_t f = 0; f < m; ++f) {
        curvature += d[f] * u[free[f]];
        slope += d[f] * grad[free[f]];
      }
      if (slope >= 0.0) break;

      double limit = std::numeric_limits<double>::infinity();
      std::size_t blocking = m;
      for (std::size_t f = 0; f < m; ++f) {
        const double a = alpha[free[f]];
        const double room = d[f] > 0.0 ? (c - a) / d[f] : d[f] < 0.0 ? -a / d[f] : limit;
        if (room < limit) {
          limit = room;
          blocking = f;
        }
      }
      const double exact = curvature > 1e-12 * dot(d, d) ? -slope / curvature : limit;
      const double step = std::min(exact, limit);
      if (!(step > 0.0)) break;

      for (std::size_t f = 0; f < m; ++f) alpha[free[f]] = std::clamp(alpha[free[f]] + step * d[f], 0.0, c);
      if (step == limit) alpha[free[blocking]] = d[blocking] > 0.0 ? c : 0.0;
      for (std::size_t t = 0; t < n; ++t) grad[t] += step * u[t];
      out.change += step * slope + 0.5 * step * step * curvature;
      if (step == limit) {
        blocked = blocking;
        break;
      }

      std::vector<double> r_next = residual();
      const double rr_next = dot(r_next, r_next);
      const double beta = rr_next / rr;
      for (std::size_t f = 0; f < m; ++f) d[f] = r_next[f] + beta * d[f];
      r = std::move(r_next);
      rr = rr_next;
    }
    if (blocked == m) break;
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(blocked));
  }
  return out;
}

}  // namespace

DualSolution solve_dual(const FeatureMatrix& x, std::span<const int> y, double c, const KernelConfig& kernel,
                        const SmoOptions& options, std::span<const double> initial_alpha) {
  check_inputs(x, y, c, kernel);
  const std::size_t n = x.rows();
  QMatrix q(x, y, kernel, options);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  double objective = 0.0;             // minimisation form
  if (!initial_alpha.empty()) {
    if (initial_alpha.size() != n) throw PreconditionError("initial alpha has the wrong length");
    double balance = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (!(initial_alpha[t] >= 0.0 && initial_alpha[t] <= c)) {
        throw PreconditionError("initial alpha outside [0, C]");
      }
      balance += y[t] * initial_alpha[t];
    }
    if (std::abs(balance) > 1e-8 * std::max(1.0, c)) throw PreconditionError("initial alpha violates y'a = 0");
    alpha.assign(initial_alpha.begin(), initial_alpha.end());
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] == 0.0) continue;
      const auto qt = q.row(t);
      for (std::size_t r = 0; r < n; ++r) grad[r] += qt[r] * alpha[t];
    }
    for (std::size_t t = 0; t < n; ++t) objective += 0.5 * alpha[t] * (grad[t] - 1.0);
  }
  const auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0; };
  const auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c; };

  DualSolution sol;
  // Polish spacing adapts: it doubles while a polish gains less per kernel
  // row than the pair updates since the previous one, and shrinks otherwise.
  std::size_t interval = options.polish_interval;
  std::size_t next_polish = std::max<std::size_t>(
      interval, static_cast<std::size_t>(options.polish_delay * static_cast<double>(n)));
  double pair_gain = 0.0;
  std::size_t window_start = 0;
  for (;;) {
    // i is the maximal violator; j maximises the second-order gain against i.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
    }
    if (i < n) {
      const auto qi = q.row(i);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double v = -y[t] * grad[t];
        gmin = std::min(gmin, v);
        const double diff = gmax - v;
        if (diff <= 0.0) continue;
        double quad = q.diag(i) + q.diag(t) - 2.0 * y[i] * y[t] * qi[t];
        if (quad <= 0.0) quad = kTau;
        const double gain = -diff * diff / quad;
        if (gain < best) {
          best = gain;
          j = t;
        }
      }
    }
    sol.max_violation = (i == n || gmin == std::numeric_limits<double>::infinity()) ? 0.0 : gmax - gmin;
    if (i == n || j == n || gmax - gmin < options.tolerance) break;
    if (sol.updates >= options.max_updates) {
      throw ConvergenceError("SMO did not converge within " + std::to_string(options.max_updates) +
                             " pair updates (C=" + std::to_string(c) + ", kernel " + std::string(to_string(kernel.kind)) +
                             ", gamma=" + std::to_string(kernel.gamma) + ", n=" + std::to_string(n) +
                             ", KKT violation " + std::to_string(gmax - gmin) + ")");
    }

    const auto qi = q.row(i);
    const auto qj = q.row(j);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double& ai = alpha[i];
    double& aj = alpha[j];

    if (y[i] != y[j]) {
      double quad = q.diag(i) + q.diag(j) + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = q.diag(i) + q.diag(j) - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }

    const double di = ai - old_i;
    const double dj = aj - old_j;
    const double step_change = grad[i] * di + grad[j] * dj +
                               0.5 * (q.diag(i) * di * di + 2.0 * qi[j] * di * dj + q.diag(j) * dj * dj);
    if (options.verify_monotone && step_change > 1e-12 * (1.0 + std::abs(objective))) {
      throw std::logic_error("SMO dual objective decreased by " + std::to_string(step_change));
    }
    objective += step_change;
    pair_gain -= step_change;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * di + qj[t] * dj;
    ++sol.updates;

    if (interval > 0 && sol.updates >= next_polish) {
      const PolishResult polish = polish_free_set(q, y, c, options.tolerance, alpha, grad);
      if (options.verify_monotone && polish.change > 1e-12 * (1.0 + std::abs(objective))) {
        throw std::logic_error("free-set polish increased the objective by " + std::to_string(polish.change));
      }
      objective += polish.change;
      const double pair_rows = 2.0 * static_cast<double>(sol.updates - window_start);
      if (-polish.change * pair_rows < pair_gain * static_cast<double>(std::max<std::size_t>(polish.rows, 1))) {
        interval *= 2;
      } else {
        interval = std::max(options.polish_interval, interval / 2);
      }
      next_polish = sol.updates + interval;
      window_start = sol.updates;
      pair_gain = 0.0;
    }
  }

  // Bias from free support vectors, else the midpoint of the feasible
  // interval. Multipliers within a relative 1e-9 of a bound count as bounded:
  // a pair step can land a hair inside the box, and treating that vector as
  // free would pin the bias to one end of the interval.
  const double slack = 1e-9 * c;
  std::size_t n_free = 0;
  double sum_free = 0.0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c - slack) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= slack) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.bias = -rho;

  double f = 0.0;
  for (std::size_t t = 0; t < n; ++t) f += alpha[t] * (grad[t] - 1.0);
  sol.dual_objective = -0.5 * f;
  sol.alpha = std::move(alpha);
  return sol;
}

}  // namespace cogeval
