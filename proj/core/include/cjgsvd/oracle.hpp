#pragma once

// Dense reference GSVD and the geometric measures used to compare against it.
// Backed by Eigen, independently of the library's own dense kernels.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/sparse.hpp"

namespace cjgsvd {

struct GsvdReference {
  std::vector<double> c;  // descending, ties by index
  std::vector<double> s;
  DenseMatrix u_full;  // m1×n, zero columns where c is degenerate
  DenseMatrix v_full;  // m2×n, zero columns where s is degenerate
  DenseMatrix x_full;  // n×n, H-orthonormal
  std::size_t q = 0;   // nontrivial pairs
  std::size_t q1 = 0;  // zero values (c = 0)
  std::size_t q2 = 0;  // infinite values (s = 0)
  std::size_t l1 = 0;  // m1 − rank(A)
  std::size_t l2 = 0;  // m2 − rank(B)

  std::size_t n() const noexcept { return c.size(); }
};

/// Throws NotPositiveDefinite when H = AᵀA + BᵀB is singular and
/// DenseCeilingExceeded when n is above the ceiling.
GsvdReference dense_gsvd(const MatrixPair& pair, std::size_t dense_ceiling = 2000);

/// Block product with H.
using HApply = std::function<DenseMatrix(const DenseMatrix&)>;

/// H·X = Aᵀ(AX) + Bᵀ(BX).
HApply h_operator(const MatrixPair& pair);
/// Multiplication by an explicit symmetric matrix.
HApply h_operator(const DenseMatrix& h);

/// χ(λ, μ) = |λ − μ| / (√(1+λ²)·√(1+μ²)); an infinite argument uses the
/// limit 1/√(1+x²).
double chordal(double lambda, double mu);

/// χ(σ₁², σ₂²) from the pairs (c₁, s₁) and (c₂, s₂), exact for s = 0.
double chordal_squared(double c1, double s1, double c2, double s2);

struct HAngle {
  double cos = 1.0;
  double sin = 0.0;
};

/// Angle in the H-inner product. Throws ZeroVector for a zero argument.
HAngle h_angle(std::span<const double> y, std::span<const double> z, const HApply& h);

/// ‖(I − Z₁Z₁ᵀH)W₁‖_H for H-orthonormal Z₁, W₁ of equal width.
double subspace_distance(const DenseMatrix& z1, const DenseMatrix& w1, const HApply& h);

/// 2-norm condition number of a dense matrix (ratio of extreme singular values).
double condition_number(const DenseMatrix& m);

/// Dense [A; B].
DenseMatrix stacked_dense(const MatrixPair& pair);

}  // namespace cjgsvd
