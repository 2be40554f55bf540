#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace cogeval {

/// Row-major real matrix: frame-level features (rows = frames) or a pooled
/// session vector (rows = 1). Values are held in double precision; files
/// store float32.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t dim);
  FeatureMatrix(std::size_t rows, std::size_t dim, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * dim_, dim_}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * dim_, dim_}; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * dim_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * dim_ + c]; }

  const std::vector<double>& values() const noexcept { return values_; }

  /// Appends one row; the first row appended to an empty 0x0 matrix fixes dim.
  void append_row(std::span<const double> row);

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Reads an EMB1 file, or a CSV file when the extension is ".csv".
FeatureMatrix read_feature_matrix(const std::filesystem::path& path);

/// Writes EMB1 (or CSV for ".csv"). EMB1 payloads are narrowed to float32.
void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& matrix);

/// EMB1 codec on an in-memory byte buffer.
std::vector<unsigned char> encode_emb1(const FeatureMatrix& matrix);
FeatureMatrix decode_emb1(std::span<const unsigned char> bytes);

FeatureMatrix parse_feature_csv(std::string_view text);

}  // namespace cogeval
