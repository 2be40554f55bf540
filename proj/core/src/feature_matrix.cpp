#include "cogeval/feature_matrix.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "cogeval/errors.hpp"

namespace cogeval {

namespace {

constexpr std::size_t kHeaderBytes = 12;
constexpr unsigned char kMagic[4] = {'E', 'M', 'B', '1'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<unsigned char>(v >> shift));
}

std::uint32_t get_u32(std::span<const unsigned char> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | bytes[offset + static_cast<std::size_t>(b)];
  return v;
}

bool is_csv(const std::filesystem::path& path) { return path.extension() == ".csv"; }

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open feature file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim, std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (values_.size() != rows_ * dim_) {
    throw PreconditionError("feature matrix payload has " + std::to_string(values_.size()) +
                            " values, expected " + std::to_string(rows_ * dim_));
  }
}

void FeatureMatrix::append_row(std::span<const double> row) {
  if (rows_ == 0 && dim_ == 0) dim_ = row.size();
  if (row.size() != dim_) {
    throw PreconditionError("row of width " + std::to_string(row.size()) + " appended to matrix of dim " +
                            std::to_string(dim_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<unsigned char> encode_emb1(const FeatureMatrix& matrix) {
  if (matrix.rows() > UINT32_MAX || matrix.dim() > UINT32_MAX) {
    throw PreconditionError("feature matrix too large for EMB1");
  }
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + matrix.values().size() * 4);
  for (unsigned char ch : kMagic) out.push_back(ch);
  put_u32(out, static_cast<std::uint32_t>(matrix.rows()));
  put_u32(out, static_cast<std::uint32_t>(matrix.dim()));
  for (double v : matrix.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

FeatureMatrix decode_emb1(std::span<const unsigned char> bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("EMB1: truncated header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) throw FormatError("EMB1: bad magic");
  const std::uint64_t rows = get_u32(bytes, 4);
  const std::uint64_t dim = get_u32(bytes, 8);
  if (rows == 0 || dim == 0) throw FormatError("EMB1: rows and dim must be positive");
  const std::uint64_t expected = rows * dim * 4;
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (payload < expected) {
    throw FormatError("EMB1: truncated payload: header declares " + std::to_string(rows) + "x" +
                      std::to_string(dim) + " but only " + std::to_string(payload / 4) + " floats present");
  }
  if (payload > expected) throw FormatError("EMB1: trailing bytes after payload");

  std::vector<double> values(rows * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
    if (!std::isfinite(f)) throw FormatError("EMB1: non-finite value at index " + std::to_string(i));
    values[i] = f;
  }
  return FeatureMatrix(rows, dim, std::move(values));
}

FeatureMatrix parse_feature_csv(std::string_view text) {
  FeatureMatrix m;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    row.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      std::string_view cell = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError("CSV: bad number '" + std::string(cell) + "'", line_no);
      }
      if (!std::isfinite(v)) throw FormatError("CSV: non-finite value on line " + std::to_string(line_no));
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (m.rows() > 0 && row.size() != m.dim()) {
      throw ParseError("CSV: expected " + std::to_string(m.dim()) + " columns, got " + std::to_string(row.size()),
                       line_no);
    }
    m.append_row(row);
  }
  if (m.empty()) throw FormatError("CSV: no rows");
  return m;
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  try {
    if (is_csv(path)) {
      return parse_feature_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
    return decode_emb1(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  if (matrix.empty() || matrix.dim() == 0) throw PreconditionError("refusing to write an empty feature matrix");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create feature file " + path.string());
  if (is_csv(path)) {
    char buf[32];
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      for (std::size_t c = 0; c < matrix.dim(); ++c) {
        if (c > 0) out.put(',');
        const auto res = std::to_chars(buf, buf + sizeof buf, matrix(r, c));
        out.write(buf, res.ptr - buf);
      }
      out.put('\n');
    }
  } else {
    const auto bytes = encode_emb1(matrix);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error("failed writing feature file " + path.string());
}

}  // namespace cogeval
