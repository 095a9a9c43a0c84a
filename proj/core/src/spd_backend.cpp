#include "cjgsvd/spd_backend.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cjgsvd/error.hpp"

namespace cjgsvd {

class SpdBackendAccess {
 public:
  static void count(const SpdBackend& b, std::uint64_t k) { b.nls_->fetch_add(k); }
};

namespace {

using BlockOp = std::function<DenseMatrix(const DenseMatrix&)>;

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

// Per-column helpers for row-major blocks; every column carries its own
// recurrence scalars.
std::vector<double> column_dots(const DenseMatrix& x, const DenseMatrix& y) {
  std::vector<double> d(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    const auto yi = y.row(i);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += xi[j] * yi[j];
  }
  return d;
}

std::vector<double> column_norms(const DenseMatrix& x) {
  auto d = column_dots(x, x);
  for (double& v : d) v = std::sqrt(v);
  return d;
}

// y[:, j] = a[j]·x[:, j] + b[j]·y[:, j]
void column_update(std::span<const double> a, const DenseMatrix& x, std::span<const double> b,
                   DenseMatrix& y) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    auto yi = y.row(i);
    for (std::size_t j = 0; j < a.size(); ++j) yi[j] = a[j] * xi[j] + b[j] * yi[j];
  }
}

void column_scale(std::span<const double> a, DenseMatrix& y) {
  for (std::size_t i = 0; i < y.rows(); ++i) {
    auto yi = y.row(i);
    for (std::size_t j = 0; j < a.size(); ++j) yi[j] *= a[j];
  }
}

DenseMatrix row_block(const DenseMatrix& y, std::size_t first, std::size_t count) {
  DenseMatrix out(count, y.cols());
  const auto src = y.values().subspan(first * y.cols(), count * y.cols());
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

// (γAᵀA + ζBᵀB)X, matrix-free.
DenseMatrix normal_apply(const SpdBackend& b, const DenseMatrix& x) {
  const auto& w = b.weights();
  DenseMatrix y(x.rows(), x.cols());
  if (w.gamma != 0.0) axpy(w.gamma, spmm_t(b.pair().a, spmm(b.pair().a, x)).values(), y.values());
  if (w.zeta != 0.0) axpy(w.zeta, spmm_t(b.pair().b, spmm(b.pair().b, x)).values(), y.values());
  return y;
}

// Conjugate gradients on every column of `rhs` at once. A column stops when
// its recursive residual reaches solve_tol·‖rhs_j‖.
DenseMatrix cg(const SpdBackend& b, const DenseMatrix& rhs) {
  const std::size_t k = rhs.cols();
  DenseMatrix x(rhs.rows(), k);
  DenseMatrix r = rhs;
  DenseMatrix p = rhs;
  const auto rhs_norm = column_norms(rhs);
  std::vector<double> rr(k), target(k), alpha(k), minus_alpha(k), beta(k), one(k, 1.0);
  std::vector<bool> active(k);
  std::size_t remaining = 0;
  for (std::size_t j = 0; j < k; ++j) {
    rr[j] = rhs_norm[j] * rhs_norm[j];
    target[j] = b.solve_tol() * rhs_norm[j];
    active[j] = rhs_norm[j] > 0.0;
    remaining += active[j];
  }
  for (std::size_t it = 0; it < b.max_solve_iters(); ++it) {
    if (remaining == 0) return x;
    const DenseMatrix q = normal_apply(b, p);
    const auto pq = column_dots(p, q);
    for (std::size_t j = 0; j < k; ++j) {
      alpha[j] = 0.0;
      if (!active[j]) continue;
      if (!(pq[j] > 0.0))
        throw NoConvergence("cg (nonpositive curvature)", it, std::sqrt(rr[j]) / rhs_norm[j]);
      alpha[j] = rr[j] / pq[j];
    }
    for (std::size_t j = 0; j < k; ++j) minus_alpha[j] = -alpha[j];
    column_update(alpha, p, one, x);
    column_update(minus_alpha, q, one, r);
    const auto rr_new = column_dots(r, r);
    for (std::size_t j = 0; j < k; ++j) {
      beta[j] = 0.0;
      if (!active[j]) continue;
      if (std::sqrt(rr_new[j]) <= target[j]) {
        active[j] = false;
        --remaining;
        continue;
      }
      beta[j] = rr_new[j] / rr[j];
      rr[j] = rr_new[j];
    }
    column_update(one, r, beta, p);
  }
  if (remaining == 0) return x;
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    if (active[j]) worst = std::max(worst, std::sqrt(rr[j]) / rhs_norm[j]);
  throw NoConvergence("cg", b.max_solve_iters(), worst);
}

// Paige–Saunders LSQR for min ‖M x_j − f_j‖ from x = 0, column by column
// with shared block products. `normal` selects the stopping test:
// ‖Mᵀr‖ ≤ tol·‖Mᵀf‖ when true, ‖r‖ ≤ tol·‖f‖ otherwise (for consistent
// systems, where the minimum-norm solution is wanted).
DenseMatrix lsqr(const BlockOp& m, const BlockOp& mt, std::size_t cols, const DenseMatrix& f,
                 double tol, std::size_t max_iters, bool normal) {
  const std::size_t k = f.cols();
  DenseMatrix x(cols, k);
  DenseMatrix u = f;
  std::vector<double> beta = column_norms(u);
  std::vector<double> inv(k), alpha(k), phibar(k), rhobar(k), target(k), step(k), decay(k);
  std::vector<bool> active(k);
  auto normalize = [&](DenseMatrix& y, const std::vector<double>& norms) {
    for (std::size_t j = 0; j < k; ++j) inv[j] = active[j] && norms[j] > 0.0 ? 1.0 / norms[j] : 0.0;
    column_scale(inv, y);
  };
  for (std::size_t j = 0; j < k; ++j) active[j] = beta[j] > 0.0;
  normalize(u, beta);
  DenseMatrix v = mt(u);
  alpha = column_norms(v);
  for (std::size_t j = 0; j < k; ++j) active[j] = active[j] && alpha[j] > 0.0;
  normalize(v, alpha);
  DenseMatrix w = v;
  std::size_t remaining = 0;
  for (std::size_t j = 0; j < k; ++j) {
    phibar[j] = beta[j];
    rhobar[j] = alpha[j];
    target[j] = normal ? tol * alpha[j] * beta[j] : tol * beta[j];
    remaining += active[j];
  }
  std::vector<double> minus(k), one(k, 1.0);
  for (std::size_t it = 0; it < max_iters; ++it) {
    if (remaining == 0) return x;
    // u ← M v − α u, v ← Mᵀu − β v, both normalized.
    DenseMatrix mu = m(v);
    for (std::size_t j = 0; j < k; ++j) minus[j] = -alpha[j];
    column_update(minus, u, one, mu);
    u = std::move(mu);
    beta = column_norms(u);
    normalize(u, beta);
    DenseMatrix mv = mt(u);
    for (std::size_t j = 0; j < k; ++j) minus[j] = -beta[j];
    column_update(minus, v, one, mv);
    v = std::move(mv);
    alpha = column_norms(v);
    normalize(v, alpha);

    std::vector<bool> finished(k, false);
    for (std::size_t j = 0; j < k; ++j) {
      step[j] = 0.0;
      decay[j] = 1.0;
      if (!active[j]) continue;
      const double rho = std::hypot(rhobar[j], beta[j]);
      const double c = rhobar[j] / rho;
      const double s = beta[j] / rho;
      const double theta = s * alpha[j];
      rhobar[j] = -c * alpha[j];
      const double phi = c * phibar[j];
      phibar[j] = s * phibar[j];
      step[j] = phi / rho;
      decay[j] = -theta / rho;
      const double measure = normal ? phibar[j] * alpha[j] * std::abs(c) : phibar[j];
      finished[j] = measure <= target[j] || alpha[j] == 0.0 || beta[j] == 0.0;
    }
    column_update(step, w, one, x);
    column_update(one, v, decay, w);
    for (std::size_t j = 0; j < k; ++j)
      if (finished[j]) {
        active[j] = false;
        --remaining;
      }
  }
  if (remaining == 0) return x;
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    if (active[j]) worst = std::max(worst, normal ? phibar[j] * alpha[j] : phibar[j]);
  throw NoConvergence("lsqr", max_iters, worst);
}

// Stacked operator K = [√γ A; √ζ B] and its transpose.
BlockOp stacked(const SpdBackend& b) {
  const double ga = std::sqrt(b.weights().gamma);
  const double ze = std::sqrt(b.weights().zeta);
  return [&b, ga, ze](const DenseMatrix& x) {
    const DenseMatrix ax = spmm(b.pair().a, x);
    const DenseMatrix bx = spmm(b.pair().b, x);
    DenseMatrix out(ax.rows() + bx.rows(), x.cols());
    auto o = out.values();
    const auto av = ax.values();
    const auto bv = bx.values();
    for (std::size_t i = 0; i < av.size(); ++i) o[i] = ga * av[i];
    for (std::size_t i = 0; i < bv.size(); ++i) o[av.size() + i] = ze * bv[i];
    return out;
  };
}

BlockOp stacked_t(const SpdBackend& b) {
  const double ga = std::sqrt(b.weights().gamma);
  const double ze = std::sqrt(b.weights().zeta);
  return [&b, ga, ze](const DenseMatrix& y) {
    const std::size_t m1 = b.pair().a.rows();
    DenseMatrix out = spmm_t(b.pair().a, row_block(y, 0, m1));
    scale(ga, out.values());
    axpy(ze, spmm_t(b.pair().b, row_block(y, m1, y.rows() - m1)).values(), out.values());
    return out;
  };
}

DenseMatrix lsqr_solve(const SpdBackend& b, const DenseMatrix& rhs) {
  // Minimum-norm w with Kᵀw = rhs, then min ‖Ky − w‖: KᵀKy = Kᵀw = rhs.
  const std::size_t rows = b.pair().a.rows() + b.pair().b.rows();
  const DenseMatrix w = lsqr(stacked_t(b), stacked(b), rows, rhs, b.solve_tol(),
                             b.max_solve_iters(), false);
  return lsqr(stacked(b), stacked_t(b), b.n(), w, b.solve_tol(), b.max_solve_iters(), true);
}

// Block forward/backward substitution with a CSR lower factor whose last entry
// in every row is the diagonal.
void forward_block(const SparseMatrix& l, DenseMatrix& y) {
  const auto off = l.row_offsets();
  const auto idx = l.col_indices();
  const auto val = l.values();
  for (std::size_t i = 0; i < l.rows(); ++i) {
    auto yi = y.row(i);
    const std::size_t last = off[i + 1] - 1;
    for (std::size_t k = off[i]; k < last; ++k) axpy(-val[k], y.row(idx[k]), yi);
    scale(1.0 / val[last], yi);
  }
}

void backward_block(const SparseMatrix& l, DenseMatrix& y) {
  const auto off = l.row_offsets();
  const auto idx = l.col_indices();
  const auto val = l.values();
  for (std::size_t i = l.rows(); i-- > 0;) {
    auto yi = y.row(i);
    const std::size_t last = off[i + 1] - 1;
    scale(1.0 / val[last], yi);
    for (std::size_t k = off[i]; k < last; ++k) axpy(-val[k], yi, y.row(idx[k]));
  }
}

// Uncounted block solve.
DenseMatrix solve_block(const SpdBackend& b, DenseMatrix rhs) {
  if (rhs.rows() != b.n()) throw DimensionMismatch("solve: rhs rows != n");
  if (b.mode() == SolveMode::dense_cholesky) {
    forward_block(*b.factor(), rhs);
    backward_block(*b.factor(), rhs);
    return rhs;
  }
  return b.mode() == SolveMode::cg ? cg(b, rhs) : lsqr_solve(b, rhs);
}

DenseMatrix scaled_gram_apply(const SparseMatrix& m, double factor, const DenseMatrix& z) {
  DenseMatrix g = spmm_t(m, spmm(m, z));
  scale(factor, g.values());
  return g;
}

// Unscaled S applied to a block, without counting.
DenseMatrix apply_S_block(const SpdBackend& b, const DenseMatrix& z) {
  const auto& w = b.weights();
  const auto& pair = b.pair();
  if (b.mode() == SolveMode::lsqr && w.gamma > 0.0 && w.zeta > 0.0) {
    // min ‖Ky − f‖ with f = [η/√γ·Az; −ξ/√ζ·Bz], so Kᵀf = (ηAᵀA − ξBᵀB)z.
    const double fa = w.eta / std::sqrt(w.gamma);
    const double fb = -w.xi / std::sqrt(w.zeta);
    const DenseMatrix az = spmm(pair.a, z);
    const DenseMatrix bz = spmm(pair.b, z);
    DenseMatrix f(az.rows() + bz.rows(), z.cols());
    auto fv = f.values();
    const auto av = az.values();
    const auto bv = bz.values();
    for (std::size_t i = 0; i < av.size(); ++i) fv[i] = fa * av[i];
    for (std::size_t i = 0; i < bv.size(); ++i) fv[av.size() + i] = fb * bv[i];
    return lsqr(stacked(b), stacked_t(b), b.n(), f, b.solve_tol(), b.max_solve_iters(), true);
  }
  if (w.gamma != 0.0) {
    // y = ȳ + (η/γ)z with (γAᵀA + ζBᵀB)ȳ = (−ξ − ηζ/γ)BᵀBz.
    DenseMatrix y = solve_block(b, scaled_gram_apply(pair.b, -w.xi - w.eta * w.zeta / w.gamma, z));
    axpy(w.eta / w.gamma, z.values(), y.values());
    return y;
  }
  DenseMatrix rhs = scaled_gram_apply(pair.a, w.eta, z);
  axpy(-w.xi, scaled_gram_apply(pair.b, 1.0, z).values(), rhs.values());
  return solve_block(b, std::move(rhs));
}

}  // namespace

SpdBackend make_backend(const MatrixPair& pair, const BackendOptions& options) {
  const auto& w = options.weights;
  if (!(w.gamma >= 0.0 && w.zeta >= 0.0 && w.eta >= 0.0 && w.xi >= 0.0))
    throw InvalidArgument("weights must be nonnegative");
  if (w.gamma == 0.0 && w.zeta == 0.0) throw NotPositiveDefinite(0);
  if (w.eta == 0.0 && w.xi == 0.0)
    throw InvalidArgument("eta and xi must not both be zero");
  if (!(options.solve_tol > 0.0)) throw InvalidArgument("solve_tol must be positive");

  SpdBackend b;
  b.pair_ = &pair;
  b.weights_ = w;
  b.mode_ = options.mode;
  b.solve_tol_ = options.solve_tol;
  b.max_solve_iters_ = options.max_solve_iters != 0
                           ? options.max_solve_iters
                           : std::max<std::size_t>(1000, 20 * pair.n());

  if (options.mode == SolveMode::dense_cholesky) {
    if (pair.n() > options.dense_ceiling)
      throw DenseCeilingExceeded(pair.n(), options.dense_ceiling);
    DenseMatrix k(pair.n(), pair.n());
    if (w.gamma != 0.0) axpy(w.gamma, gram(pair.a).values(), k.values());
    if (w.zeta != 0.0) axpy(w.zeta, gram(pair.b).values(), k.values());
    b.factor_ = SparseMatrix::from_dense(cholesky(k));
  }
  return b;
}

std::vector<double> solve_spd(const SpdBackend& backend, std::span<const double> rhs) {
  if (rhs.size() != backend.n()) throw DimensionMismatch("solve_spd: rhs length != n");
  DenseMatrix block(rhs.size(), 1);
  block.set_column(0, rhs);
  const DenseMatrix y = solve_block(backend, std::move(block));
  SpdBackendAccess::count(backend, 1);
  return y.column(0);
}

DenseMatrix solve_spd(const SpdBackend& backend, const DenseMatrix& rhs) {
  DenseMatrix y = solve_block(backend, rhs);
  SpdBackendAccess::count(backend, rhs.cols());
  return y;
}

std::vector<double> apply_S(const SpdBackend& backend, std::span<const double> z) {
  if (z.size() != backend.n()) throw DimensionMismatch("apply_S: length != n");
  DenseMatrix block(z.size(), 1);
  block.set_column(0, z);
  return apply_S(backend, block).column(0);
}

DenseMatrix apply_S(const SpdBackend& backend, const DenseMatrix& z) {
  if (z.rows() != backend.n()) throw DimensionMismatch("apply_S: rows != n");
  DenseMatrix y = apply_S_block(backend, z);
  SpdBackendAccess::count(backend, z.cols());
  return y;
}

DenseMatrix apply_P(const SpdBackend& backend, const ChebFilter& filter,
                    const DenseMatrix& z) {
  if (z.rows() != backend.n()) throw DimensionMismatch("apply_P: rows != n");
  const SpectralMap map(backend.weights());
  if (!(filter.interval.map == map))
    throw InvalidArgument("filter was built for different weights than the backend");
  const bool rescale = !map.is_identity();

  auto s_hat = [&](const DenseMatrix& x) {
    DenseMatrix y = apply_S(backend, x);
    if (rescale) {
      scale(map.scale(), y.values());
      axpy(map.shift(), x.values(), y.values());
    }
    return y;
  };

  const auto& w = filter.weights;
  DenseMatrix out = z;
  scale(w[0], out.values());
  if (filter.d == 0) return out;

  DenseMatrix t_prev = z;
  DenseMatrix t_cur = s_hat(z);
  axpy(w[1], t_cur.values(), out.values());
  for (std::size_t j = 2; j <= filter.d; ++j) {
    DenseMatrix t_next = s_hat(t_cur);
    auto next = t_next.values();
    const auto prev = t_prev.values();
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
    axpy(w[j], next, out.values());
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return out;
}

}  // namespace cjgsvd
