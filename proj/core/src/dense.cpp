#include "cjgsvd/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cjgsvd/error.hpp"

namespace cjgsvd {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("ragged row list");
    std::copy(row.begin(), row.end(), m.row(i).begin());
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> v) {
  if (v.size() != rows_) throw DimensionMismatch("set_column length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw DimensionMismatch("column range");
  DenseMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("multiply_tn");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto ak = a.row(k);
    auto bk = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      auto ci = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("subtract");
  DenseMatrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] -= bv[i];
  return c;
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.values()); }

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double orthogonality_error(const DenseMatrix& a) {
  DenseMatrix g = multiply_tn(a, a);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return max_abs(g);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) {
  // Scaled accumulation avoids overflow for large entries.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

ThinQr thin_qr(const DenseMatrix& m, double rank_tol, const char* stage) {
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();
  if (n < p) throw DimensionMismatch("thin_qr needs rows >= cols");

  // Householder vectors are stored below the diagonal of `work`.
  DenseMatrix work = m;
  std::vector<double> beta(p, 0.0);
  std::vector<double> rdiag(p, 0.0);

  for (std::size_t k = 0; k < p; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k; i < n; ++i) sigma += work(i, k) * work(i, k);
    const double alpha = std::sqrt(sigma);
    if (alpha == 0.0) {
      rdiag[k] = 0.0;
      beta[k] = 0.0;
      continue;
    }
    const double x0 = work(k, k);
    const double diag = x0 > 0.0 ? -alpha : alpha;
    const double v0 = x0 - diag;
    // v = [1; x(k+1:)/v0], beta = -v0/diag
    for (std::size_t i = k + 1; i < n; ++i) work(i, k) /= v0;
    beta[k] = -v0 / diag;
    rdiag[k] = diag;
    work(k, k) = 1.0;
    for (std::size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += work(i, k) * work(i, j);
      s *= beta[k];
      for (std::size_t i = k; i < n; ++i) work(i, j) -= s * work(i, k);
    }
  }

  ThinQr out{DenseMatrix(n, p), DenseMatrix(p, p)};
  for (std::size_t k = 0; k < p; ++k) {
    out.r(k, k) = rdiag[k];
    for (std::size_t j = k + 1; j < p; ++j) out.r(k, j) = work(k, j);
  }

  const double r11 = std::abs(rdiag.empty() ? 0.0 : rdiag[0]);
  for (std::size_t k = 0; k < p; ++k) {
    if (!(std::abs(rdiag[k]) >= rank_tol * r11) || r11 == 0.0)
      throw RankDeficient(stage, k);
  }

  // Accumulate Q = H_0 H_1 ... H_{p-1} applied to the first p unit columns.
  for (std::size_t j = 0; j < p; ++j) out.q(j, j) = 1.0;
  for (std::size_t kk = p; kk-- > 0;) {
    for (std::size_t j = kk; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = kk; i < n; ++i) s += work(i, kk) * out.q(i, j);
      s *= beta[kk];
      for (std::size_t i = kk; i < n; ++i) out.q(i, j) -= s * work(i, kk);
    }
  }

  // Sign convention: nonnegative diagonal of R.
  for (std::size_t k = 0; k < p; ++k) {
    if (out.r(k, k) < 0.0) {
      for (std::size_t j = k; j < p; ++j) out.r(k, j) = -out.r(k, j);
      for (std::size_t i = 0; i < n; ++i) out.q(i, k) = -out.q(i, k);
    }
  }
  return out;
}

DenseMatrix cholesky(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw DimensionMismatch("cholesky needs a square matrix");
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto lj = l.row(j);
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(d);
    lj[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto li = l.row(i);
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= li[k] * lj[k];
      li[j] = v / ljj;
    }
  }
  return l;
}

DenseMatrix solve_lower(const DenseMatrix& l, const DenseMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw DimensionMismatch("solve_lower");
  DenseMatrix x = b;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t j = 0; j < x.cols(); ++j) xi[j] -= lik * xk[j];
    }
    const double inv = 1.0 / l(i, i);
    for (double& v : xi) v *= inv;
  }
  return x;
}

DenseMatrix solve_lower_transposed(const DenseMatrix& l, const DenseMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw DimensionMismatch("solve_lower_transposed");
  DenseMatrix x = b;
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    const double inv = 1.0 / l(i, i);
    for (double& v : xi) v *= inv;
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t j = 0; j < x.cols(); ++j) xk[j] -= lik * xi[j];
    }
  }
  return x;
}

namespace {

// Householder reduction to tridiagonal form (JAMA tred2). On return `v`
// holds the accumulated orthogonal transform, `d` the diagonal and `e` the
// subdiagonal in e[1..n-1].
void tridiagonalize(DenseMatrix& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k)
          v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal matrix (JAMA tql2).
void tridiagonal_ql(DenseMatrix& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const std::size_t n = v.rows();
  constexpr std::size_t kMaxSweeps = 60;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      std::size_t iter = 0;
      do {
        if (++iter > kMaxSweeps)
          throw NoConvergence("symmetric QL iteration", iter, std::abs(e[l]));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] = d[l] + f;
    e[l] = 0.0;
  }
}

}  // namespace

SymEig sym_eig(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw DimensionMismatch("sym_eig needs a square matrix");
  SymEig out;
  if (n == 0) return out;

  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double sym = 0.5 * (s(i, j) + s(j, i));
      v(i, j) = sym;
      v(j, i) = sym;
    }
  std::vector<double> d(n), e(n);
  if (n == 1) {
    d[0] = v(0, 0);
    v(0, 0) = 1.0;
  } else {
    tridiagonalize(v, d, e);
    tridiagonal_ql(v, d, e);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  out.theta.resize(n);
  out.w = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.theta[j] = d[src];
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(big, src)) * (1.0 + 1e-12)) big = i;
    const double sign = v(big, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.w(i, j) = sign * v(i, src);
  }
  return out;
}

}  // namespace cjgsvd
