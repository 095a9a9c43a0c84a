#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cjgsvd/dense.hpp"

namespace cjgsvd {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row storage. Column indices are strictly increasing
/// within each row and every stored value is finite.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols,
               std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices,
               std::vector<double> values);

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  /// Drops exact zeros of a dense matrix.
  static SparseMatrix from_dense(const DenseMatrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept {
    return row_offsets_;
  }
  std::span<const std::size_t> col_indices() const noexcept {
    return col_indices_;
  }
  std::span<const double> values() const noexcept { return values_; }

  DenseMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x);
std::vector<double> spmv_t(const SparseMatrix& m, std::span<const double> x);
/// Block products M·X and Mᵀ·X for a row-major n×p block.
DenseMatrix spmm(const SparseMatrix& m, const DenseMatrix& x);
DenseMatrix spmm_t(const SparseMatrix& m, const DenseMatrix& x);

/// Maximum absolute column sum.
double one_norm(const SparseMatrix& m);

/// Dense mᵀm accumulated row by row.
DenseMatrix gram(const SparseMatrix& m);

enum class BKind { b0, b1 };

/// b0: n×n tridiagonal Toeplitz with diagonal 3 and off-diagonals 1.
/// b1: (n−1)×n first-difference matrix with rows (…, 1, −1, …).
SparseMatrix gen_b(BKind kind, std::size_t n);

/// The problem instance (A, B) with cached 1-norms.
struct MatrixPair {
  SparseMatrix a;
  SparseMatrix b;
  double one_norm_a = 0.0;
  double one_norm_b = 0.0;

  std::size_t n() const noexcept { return a.cols(); }
};

MatrixPair make_pair(SparseMatrix a, SparseMatrix b);

struct TestPairSpec {
  enum class Kind { diagonal, random };
  Kind kind = Kind::diagonal;

  // diagonal: A = diag(c), B = diag(sqrt(1 − c²)), optionally padded with
  // zero rows so that A is (n + pad_a)×n and B is (n + pad_b)×n.
  std::vector<double> c;
  std::size_t pad_a = 0;
  std::size_t pad_b = 0;

  // random: A is m1×n with standard normal entries at the given density,
  // B = gen_b(b_kind, n).
  std::size_t n = 0;
  std::size_t m1 = 0;
  double density = 0.05;
  BKind b_kind = BKind::b0;
  std::uint64_t seed = 0;
};

MatrixPair gen_test_pair(const TestPairSpec& spec);

}  // namespace cjgsvd
