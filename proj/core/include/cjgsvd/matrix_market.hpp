#pragma once

#include <filesystem>
#include <iosfwd>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/sparse.hpp"

namespace cjgsvd {

/// Reads a real or integer Matrix Market file in coordinate or array layout.
/// Symmetric and skew-symmetric inputs are expanded to full storage and
/// duplicate coordinate entries are summed. Complex, pattern and hermitian
/// files raise UnsupportedField; malformed lines raise ParseError.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Coordinate/general writer; values are printed with 17 significant digits
/// so a read–write cycle reproduces them bit for bit.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);

/// Array/general writer (column-major values).
void write_matrix_market_array(std::ostream& out, const DenseMatrix& m);
void write_matrix_market_array(const std::filesystem::path& path,
                               const DenseMatrix& m);

}  // namespace cjgsvd
