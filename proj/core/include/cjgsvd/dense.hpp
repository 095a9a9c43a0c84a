#pragma once

// Small dense kernels: row-major storage, Householder thin QR, Cholesky,
// the symmetric eigensolver and the GSVD of a small projected pair.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cjgsvd {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Columns [first, first + count) as a new matrix.
  DenseMatrix columns(std::size_t first, std::size_t count) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ·b without forming the transpose.
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
/// ‖aᵀa − I‖ in the max-abs sense.
double orthogonality_error(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

struct ThinQr {
  DenseMatrix q;  // n×p, orthonormal columns
  DenseMatrix r;  // p×p, upper triangular with nonnegative diagonal
};

inline constexpr double kRankTolerance = 1e-12;

/// Householder thin QR of an n×p matrix (n ≥ p). Throws RankDeficient when
/// |r_ii| < rank_tol·|r_11|; `stage` is carried in the error.
ThinQr thin_qr(const DenseMatrix& m, double rank_tol = kRankTolerance,
               const char* stage = "dense");

/// Lower Cholesky factor of a symmetric positive definite matrix; only the
/// lower triangle of `s` is read.
DenseMatrix cholesky(const DenseMatrix& s);

/// Solves L·x = b (forward) and Lᵀ·x = b (backward) for every column of b.
DenseMatrix solve_lower(const DenseMatrix& l, const DenseMatrix& b);
DenseMatrix solve_lower_transposed(const DenseMatrix& l, const DenseMatrix& b);

struct SymEig {
  std::vector<double> theta;  // descending
  DenseMatrix w;              // orthogonal, column i pairs with theta[i]
};

/// Symmetric eigendecomposition by Householder tridiagonalization and the
/// implicit QL iteration. Eigenvalue ties keep the solver's column order;
/// each eigenvector's largest entry is made positive.
SymEig sym_eig(const DenseMatrix& s);

inline constexpr double kDegenerateThreshold = 1e-8;

struct SmallGsvd {
  std::vector<double> c;  // descending, each in [0,1]
  std::vector<double> s;  // sqrt(1 - c²)
  DenseMatrix u_bar;
  DenseMatrix v_bar;
  DenseMatrix x_bar;
  std::vector<bool> degenerate;
};

/// GSVD of a small p×p pair through the cross-product pencil:
/// Hp = āᵀā + b̄ᵀb̄ = LLᵀ, eig(L⁻¹āᵀāL⁻ᵀ) = WΘWᵀ, x̄ = L⁻ᵀW.
SmallGsvd small_gsvd(const DenseMatrix& a_bar, const DenseMatrix& b_bar,
                     double degenerate_tol = kDegenerateThreshold);

}  // namespace cjgsvd
