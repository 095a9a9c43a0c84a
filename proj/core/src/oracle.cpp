#include "cjgsvd/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cjgsvd/error.hpp"

namespace cjgsvd {
namespace {

using EMat = Eigen::MatrixXd;

EMat to_eigen(const DenseMatrix& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

DenseMatrix from_eigen(const EMat& e) {
  DenseMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

EMat dense_of(const SparseMatrix& s) {
  EMat e = EMat::Zero(s.rows(), s.cols());
  const auto off = s.row_offsets();
  const auto idx = s.col_indices();
  const auto val = s.values();
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) e(i, idx[k]) = val[k];
  return e;
}

std::size_t rank_of(const EMat& m) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<EMat> qr(m);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

GsvdReference dense_gsvd(const MatrixPair& pair, std::size_t dense_ceiling) {
  const std::size_t n = pair.n();
  if (n > dense_ceiling) throw DenseCeilingExceeded(n, dense_ceiling);
  const EMat a = dense_of(pair.a);
  const EMat b = dense_of(pair.b);
  const EMat ata = a.transpose() * a;
  const EMat h = ata + b.transpose() * b;

  Eigen::LLT<EMat> llt(h);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(0);
  const EMat lower = llt.matrixL();
  // A pivot below √(1e−14·‖H‖) means H is singular to working precision.
  const double pivot_floor = 1e-7 * std::sqrt(h.norm());
  for (Eigen::Index i = 0; i < lower.rows(); ++i)
    if (!(lower(i, i) > pivot_floor))
      throw NotPositiveDefinite(static_cast<std::size_t>(i));

  // Pencil (AᵀA, H): eigenvectors come back H-normalized.
  Eigen::GeneralizedSelfAdjointEigenSolver<EMat> ges(ata, h);
  if (ges.info() != Eigen::Success) throw NoConvergence("dense_gsvd", 0, 0.0);
  const Eigen::VectorXd lambda = ges.eigenvalues();
  const EMat x = ges.eigenvectors();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return lambda(static_cast<Eigen::Index>(i)) > lambda(static_cast<Eigen::Index>(j));
  });

  GsvdReference ref;
  ref.c.resize(n);
  ref.s.resize(n);
  ref.x_full = DenseMatrix(n, n);
  ref.u_full = DenseMatrix(pair.a.rows(), n);
  ref.v_full = DenseMatrix(pair.b.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd xk = x.col(static_cast<Eigen::Index>(order[k]));
    Eigen::Index imax = 0;
    xk.cwiseAbs().maxCoeff(&imax);
    if (xk(imax) < 0.0) xk = -xk;
    // c and s from ‖Ax‖ and ‖Bx‖ rather than √λ, √(1−λ), which lose half the
    // digits near 0 and 1.
    const Eigen::VectorXd ax = a * xk;
    const Eigen::VectorXd bx = b * xk;
    const double ca = ax.norm();
    const double sb = bx.norm();
    const double r = std::hypot(ca, sb);
    const double c = ca / r;
    const double s = sb / r;
    ref.c[k] = c;
    ref.s[k] = s;
    for (std::size_t i = 0; i < n; ++i) ref.x_full(i, k) = xk(static_cast<Eigen::Index>(i));
    if (c >= kDegenerateThreshold) {
      for (std::size_t i = 0; i < pair.a.rows(); ++i)
        ref.u_full(i, k) = ax(static_cast<Eigen::Index>(i)) / c;
    }
    if (s >= kDegenerateThreshold) {
      for (std::size_t i = 0; i < pair.b.rows(); ++i)
        ref.v_full(i, k) = bx(static_cast<Eigen::Index>(i)) / s;
    }
    if (c < kDegenerateThreshold) ++ref.q1;
    else if (s < kDegenerateThreshold) ++ref.q2;
    else ++ref.q;
  }
  ref.l1 = pair.a.rows() - rank_of(a);
  ref.l2 = pair.b.rows() - rank_of(b);
  return ref;
}

HApply h_operator(const MatrixPair& pair) {
  return [&pair](const DenseMatrix& x) {
    DenseMatrix y = spmm_t(pair.a, spmm(pair.a, x));
    const DenseMatrix yb = spmm_t(pair.b, spmm(pair.b, x));
    auto yv = y.values();
    const auto bv = yb.values();
    for (std::size_t i = 0; i < yv.size(); ++i) yv[i] += bv[i];
    return y;
  };
}

HApply h_operator(const DenseMatrix& h) {
  return [h](const DenseMatrix& x) { return multiply(h, x); };
}

double chordal(double lambda, double mu) {
  const bool li = std::isinf(lambda);
  const bool mi = std::isinf(mu);
  if (li && mi) return 0.0;
  if (li) return 1.0 / std::sqrt(1.0 + mu * mu);
  if (mi) return 1.0 / std::sqrt(1.0 + lambda * lambda);
  return std::abs(lambda - mu) /
         (std::sqrt(1.0 + lambda * lambda) * std::sqrt(1.0 + mu * mu));
}

double chordal_squared(double c1, double s1, double c2, double s2) {
  const double a1 = c1 * c1, b1 = s1 * s1, a2 = c2 * c2, b2 = s2 * s2;
  return std::abs(a1 * b2 - a2 * b1) /
         (std::sqrt(a1 * a1 + b1 * b1) * std::sqrt(a2 * a2 + b2 * b2));
}

HAngle h_angle(std::span<const double> y, std::span<const double> z, const HApply& h) {
  if (y.size() != z.size()) throw DimensionMismatch("h_angle");
  DenseMatrix yz(y.size(), 2);
  yz.set_column(0, y);
  yz.set_column(1, z);
  const DenseMatrix hyz = h(yz);
  double yhy = 0.0, zhz = 0.0, yhz = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    yhy += y[i] * hyz(i, 0);
    zhz += z[i] * hyz(i, 1);
    yhz += y[i] * hyz(i, 1);
  }
  if (!(yhy > 0.0) || !(zhz > 0.0)) throw ZeroVector("h_angle of a zero vector");
  HAngle out;
  out.cos = std::clamp(yhz / (std::sqrt(yhy) * std::sqrt(zhz)), -1.0, 1.0);
  out.sin = std::sqrt(std::max(0.0, 1.0 - out.cos * out.cos));
  return out;
}

double subspace_distance(const DenseMatrix& z1, const DenseMatrix& w1, const HApply& h) {
  if (z1.rows() != w1.rows() || z1.cols() != w1.cols())
    throw DimensionMismatch("subspace_distance needs blocks of equal shape");
  if (w1.cols() == 0) return 0.0;
  const EMat z = to_eigen(z1);
  const EMat w = to_eigen(w1);
  const EMat hw = to_eigen(h(w1));
  const EMat r = w - z * (z.transpose() * hw);
  const EMat hr = to_eigen(h(from_eigen(r)));
  EMat g = r.transpose() * hr;
  g = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<EMat> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double condition_number(const DenseMatrix& m) {
  Eigen::JacobiSVD<EMat> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

DenseMatrix stacked_dense(const MatrixPair& pair) {
  EMat s(pair.a.rows() + pair.b.rows(), pair.n());
  s << dense_of(pair.a), dense_of(pair.b);
  return from_eigen(s);
}

}  // namespace cjgsvd
