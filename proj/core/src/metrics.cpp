#include "cogeval/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include "cogeval/errors.hpp"

namespace cogeval {

std::int64_t ConfusionMatrix::row_sum(int r) const {
  const auto& row = counts[static_cast<std::size_t>(r)];
  return row[0] + row[1] + row[2];
}

std::int64_t ConfusionMatrix::col_sum(int c) const {
  const auto cu = static_cast<std::size_t>(c);
  return counts[0][cu] + counts[1][cu] + counts[2][cu];
}

std::int64_t ConfusionMatrix::total() const { return row_sum(0) + row_sum(1) + row_sum(2); }

std::int64_t ConfusionMatrix::diagonal() const { return counts[0][0] + counts[1][1] + counts[2][2]; }

std::optional<double> ConfusionMatrix::recall(int c) const {
  const auto n = row_sum(c);
  if (n == 0) return std::nullopt;
  return static_cast<double>(counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) /
         static_cast<double>(n);
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix t;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) t.counts[c][r] = counts[r][c];
  }
  return t;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) {
    throw PreconditionError("confusion: " + std::to_string(truth.size()) + " truths vs " +
                            std::to_string(pred.size()) + " predictions");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] > 2 || pred[i] < 0 || pred[i] > 2) {
      throw PreconditionError("confusion: label out of range at index " + std::to_string(i));
    }
    ++m.counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])];
  }
  return m;
}

double uar(const ConfusionMatrix& m) {
  double sum = 0.0;
  int classes = 0;
  for (int c = 0; c < 3; ++c) {
    if (const auto r = m.recall(c)) {
      sum += *r;
      ++classes;
    }
  }
  if (classes == 0) throw PreconditionError("UAR undefined: confusion matrix has no ground-truth counts");
  return sum / classes;
}

UarSummary summarize(std::span<const double> values) {
  UarSummary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string format_percent(double fraction) {
  if (!std::isfinite(fraction)) return "nan";
  // Shortest round-trip digits, e.g. 0.617 -> "6.17e-01", so rounding acts
  // on the decimal value the user sees rather than its binary neighbour.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(fraction), std::chars_format::scientific);
  const std::string sci(buf, res.ptr);
  const auto e_pos = sci.find('e');
  std::string digits;
  for (char ch : sci.substr(0, e_pos)) {
    if (ch != '.') digits.push_back(ch);
  }
  // value = 0.d1d2d3... * 10^(exp + 1); percent*10 shifts by 3 more places.
  const int exponent = std::atoi(sci.c_str() + e_pos + 1);
  const int int_digits = exponent + 1 + 3;  // digits before the cut in units of 0.1 %

  std::string kept;
  int next_digit = 0;
  if (int_digits <= 0) {
    kept = "0";
    next_digit = int_digits == 0 ? digits[0] - '0' : 0;
  } else {
    for (int k = 0; k < int_digits; ++k) {
      kept.push_back(k < static_cast<int>(digits.size()) ? digits[static_cast<std::size_t>(k)] : '0');
    }
    next_digit = int_digits < static_cast<int>(digits.size()) ? digits[static_cast<std::size_t>(int_digits)] - '0' : 0;
  }
  if (next_digit >= 5) {
    int k = static_cast<int>(kept.size()) - 1;
    while (k >= 0 && kept[static_cast<std::size_t>(k)] == '9') kept[static_cast<std::size_t>(k--)] = '0';
    if (k < 0) kept.insert(kept.begin(), '1');
    else ++kept[static_cast<std::size_t>(k)];
  }
  while (kept.size() < 2) kept.insert(kept.begin(), '0');
  const auto first_nonzero = kept.find_first_not_of('0');
  std::string whole = kept.substr(0, kept.size() - 1);
  whole.erase(0, std::min(whole.find_first_not_of('0'), whole.size() - 1));
  std::string out = whole + "." + kept.back();
  if (fraction < 0 && first_nonzero != std::string::npos) out.insert(out.begin(), '-');
  return out;
}

std::string format_cell(double mean, std::optional<double> stddev) {
  std::string cell = format_percent(mean);
  if (stddev) cell += "±" + format_percent(*stddev);
  return cell;
}

}  // namespace cogeval
