#include "cjgsvd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cjgsvd/error.hpp"

namespace cjgsvd {
namespace {

enum class Layout { coordinate, array };
enum class Symmetry { general, symmetric, skew };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, "invalid integer '" + std::string(token) + "'");
  return v;
}

double parse_value(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError(line, "invalid value '" + std::string(token) + "'");
  return v;
}

bool is_blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++line_no;

  const auto header = split(line);
  if (header.size() != 5 || lower(std::string(header[0])) != "%%matrixmarket" ||
      lower(std::string(header[1])) != "matrix")
    throw ParseError(line_no, "missing '%%MatrixMarket matrix' banner");

  const std::string layout_s = lower(std::string(header[2]));
  const std::string field = lower(std::string(header[3]));
  const std::string symmetry_s = lower(std::string(header[4]));

  Layout layout;
  if (layout_s == "coordinate") layout = Layout::coordinate;
  else if (layout_s == "array") layout = Layout::array;
  else throw ParseError(line_no, "unknown layout '" + layout_s + "'");

  if (field == "complex" || field == "pattern")
    throw UnsupportedField("Matrix Market field '" + field + "' is not supported");
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(line_no, "unknown field '" + field + "'");

  Symmetry symmetry;
  if (symmetry_s == "general") symmetry = Symmetry::general;
  else if (symmetry_s == "symmetric") symmetry = Symmetry::symmetric;
  else if (symmetry_s == "skew-symmetric") symmetry = Symmetry::skew;
  else if (symmetry_s == "hermitian")
    throw UnsupportedField("hermitian Matrix Market files are not supported");
  else throw ParseError(line_no, "unknown symmetry '" + symmetry_s + "'");

  // Size line.
  std::vector<std::string_view> tokens;
  std::string size_line;
  while (std::getline(in, size_line)) {
    ++line_no;
    if (is_blank_or_comment(size_line)) continue;
    tokens = split(size_line);
    break;
  }
  const std::size_t expected = layout == Layout::coordinate ? 3 : 2;
  if (tokens.size() != expected) throw ParseError(line_no, "malformed size line");
  const std::size_t rows = parse_index(tokens[0], line_no);
  const std::size_t cols = parse_index(tokens[1], line_no);
  if (symmetry != Symmetry::general && rows != cols)
    throw ParseError(line_no, "symmetric matrix must be square");

  std::vector<Triplet> entries;
  auto add = [&](std::size_t i, std::size_t j, double v) {
    entries.push_back({i, j, v});
    if (i != j) {
      if (symmetry == Symmetry::symmetric) entries.push_back({j, i, v});
      else if (symmetry == Symmetry::skew) entries.push_back({j, i, -v});
    }
  };

  if (layout == Layout::coordinate) {
    const std::size_t count = parse_index(tokens[2], line_no);
    entries.reserve(symmetry == Symmetry::general ? count : 2 * count);
    std::size_t read = 0;
    while (read < count && std::getline(in, line)) {
      ++line_no;
      if (is_blank_or_comment(line)) continue;
      const auto t = split(line);
      if (t.size() != 3) throw ParseError(line_no, "expected 'row col value'");
      const std::size_t i = parse_index(t[0], line_no);
      const std::size_t j = parse_index(t[1], line_no);
      const double v = parse_value(t[2], line_no);
      if (i == 0 || j == 0 || i > rows || j > cols)
        throw ParseError(line_no, "entry index out of range");
      if (symmetry != Symmetry::general && j > i)
        throw ParseError(line_no, "symmetric storage expects the lower triangle");
      add(i - 1, j - 1, v);
      ++read;
    }
    if (read < count) throw ParseError(line_no, "unexpected end of entries");
  } else {
    // Column-major values; symmetric layouts list the lower triangle only.
    std::size_t i = 0;
    std::size_t j = 0;
    auto next_position = [&]() {
      ++i;
      while (i >= rows && j < cols) {
        ++j;
        i = symmetry == Symmetry::general ? 0 : (symmetry == Symmetry::skew ? j + 1 : j);
      }
    };
    if (symmetry == Symmetry::skew) {
      i = 0;
      next_position();
    }
    while (j < cols && std::getline(in, line)) {
      ++line_no;
      if (is_blank_or_comment(line)) continue;
      for (const auto token : split(line)) {
        if (j >= cols) throw ParseError(line_no, "too many array values");
        const double v = parse_value(token, line_no);
        if (v != 0.0) add(i, j, v);
        next_position();
      }
    }
    if (j < cols && rows > 0) throw ParseError(line_no, "unexpected end of array values");
  }

  return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      out << i + 1 << ' ' << idx[k] + 1 << ' ' << format_value(val[k]) << '\n';
}

void write_matrix_market_array(std::ostream& out, const DenseMatrix& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out << format_value(m(i, j)) << '\n';
}

void write_matrix_market_array(const std::filesystem::path& path,
                               const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_market_array(out, m);
}

}  // namespace cjgsvd
