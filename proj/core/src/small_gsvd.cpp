#include <algorithm>
#include <cmath>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/error.hpp"

namespace cjgsvd {

SmallGsvd small_gsvd(const DenseMatrix& a_bar, const DenseMatrix& b_bar,
                     double degenerate_tol) {
  const std::size_t p = a_bar.cols();
  if (b_bar.cols() != p) throw DimensionMismatch("small_gsvd column counts");

  DenseMatrix ata = multiply_tn(a_bar, a_bar);
  DenseMatrix hp = multiply_tn(b_bar, b_bar);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) hp(i, j) += ata(i, j);
  // Exact symmetry before factoring.
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double a = 0.5 * (ata(i, j) + ata(j, i));
      ata(i, j) = ata(j, i) = a;
      const double h = 0.5 * (hp(i, j) + hp(j, i));
      hp(i, j) = hp(j, i) = h;
    }

  const DenseMatrix l = cholesky(hp);
  // L⁻¹ (āᵀā) L⁻ᵀ = (L⁻¹ (L⁻¹ āᵀā)ᵀ) since āᵀā is symmetric.
  const DenseMatrix left = solve_lower(l, ata);
  const DenseMatrix reduced = solve_lower(l, transpose(left));
  const SymEig eig = sym_eig(reduced);

  SmallGsvd out;
  out.x_bar = solve_lower_transposed(l, eig.w);
  out.c.resize(p);
  out.s.resize(p);
  out.degenerate.assign(p, false);
  for (std::size_t i = 0; i < p; ++i) {
    const double theta = std::clamp(eig.theta[i], 0.0, 1.0);
    out.c[i] = std::sqrt(theta);
    out.s[i] = std::sqrt(1.0 - theta);
    out.degenerate[i] = out.c[i] < degenerate_tol || out.s[i] < degenerate_tol;
  }

  const DenseMatrix ax = multiply(a_bar, out.x_bar);
  const DenseMatrix bx = multiply(b_bar, out.x_bar);
  out.u_bar = DenseMatrix(a_bar.rows(), p);
  out.v_bar = DenseMatrix(b_bar.rows(), p);
  for (std::size_t j = 0; j < p; ++j) {
    if (out.c[j] >= degenerate_tol) {
      const double inv = 1.0 / out.c[j];
      for (std::size_t i = 0; i < ax.rows(); ++i) out.u_bar(i, j) = ax(i, j) * inv;
    }
    if (out.s[j] >= degenerate_tol) {
      const double inv = 1.0 / out.s[j];
      for (std::size_t i = 0; i < bx.rows(); ++i) out.v_bar(i, j) = bx(i, j) * inv;
    }
  }
  return out;
}

}  // namespace cjgsvd
