#include "cjgsvd/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
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

double largest_singular_value(const EMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<EMat> svd(m);
  return svd.singularValues()(0);
}

double sin_between(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

FilterSpectrum filter_spectrum(const ChebFilter& filter, const GsvdReference& ref,
                               double boundary_tol) {
  const Interval& iv = filter.interval;
  FilterSpectrum out;
  double d_il = std::numeric_limits<double>::infinity();
  double d_ir = d_il, d_ol = d_il, d_or = d_il;
  for (std::size_t i = 0; i < ref.n(); ++i) {
    const double c = ref.c[i];
    const double theta = iv.angle_of(c);
    const double g = psi_eval(filter, iv.map(c));
    out.gamma.push_back(g);

    ValueClass cls;
    double h;
    if (std::abs(c - iv.c_min) <= boundary_tol || std::abs(c - iv.c_max) <= boundary_tol) {
      cls = ValueClass::boundary;
      h = 0.5;
    } else if (c > iv.c_min && c < iv.c_max) {
      cls = ValueClass::interior;
      h = 1.0;
      d_il = std::min(d_il, std::abs(theta - iv.alpha));
      d_ir = std::min(d_ir, std::abs(theta - iv.beta));
    } else {
      cls = ValueClass::exterior;
      h = 0.0;
      if (c < iv.c_min) d_ol = std::min(d_ol, std::abs(theta - iv.alpha));
      else d_or = std::min(d_or, std::abs(theta - iv.beta));
    }
    out.classes.push_back(cls);
    out.max_step_error = std::max(out.max_step_error, std::abs(h - g));
  }
  // Every gap is bounded by min{2π − 2α, α − β, 2β}; that cap also covers the
  // case where one of the four sets is empty.
  const double cap = std::min({2.0 * std::numbers::pi - 2.0 * iv.alpha,
                               iv.alpha - iv.beta, 2.0 * iv.beta});
  out.delta_min = std::min({d_il, d_ir, d_ol, d_or, cap});
  out.min_degree = min_degree_for_separation(out.delta_min);
  out.degree_sufficient = filter.d >= out.min_degree;

  out.ordering_ok = true;
  for (std::size_t i = 0; i < out.gamma.size(); ++i) {
    const double g = out.gamma[i];
    switch (out.classes[i]) {
      case ValueClass::interior: out.ordering_ok &= g > 0.75; break;
      case ValueClass::boundary: out.ordering_ok &= g > 0.25 && g < 0.75; break;
      case ValueClass::exterior: out.ordering_ok &= g < 0.25; break;
    }
  }
  return out;
}

DiagnosticsRecord convergence_diagnostics(const MatrixPair& pair,
                                          const SolverReport& report,
                                          const GsvdReference& ref,
                                          const ChebFilter& filter,
                                          std::size_t dense_ceiling) {
  const std::size_t n = pair.n();
  if (n > dense_ceiling) throw DenseCeilingExceeded(n, dense_ceiling);
  if (report.x_history.empty())
    throw InvalidArgument("convergence diagnostics need a run with keep_history");
  if (ref.n() != n) throw DimensionMismatch("reference does not match the pair");
  const std::size_t p = report.x_history.front().cols();
  const Interval& iv = filter.interval;

  DiagnosticsRecord rec;
  for (std::size_t i = 0; i < n; ++i) rec.gamma.push_back(psi_eval(filter, iv.map(ref.c[i])));

  std::vector<std::size_t> by_gamma(n);
  std::iota(by_gamma.begin(), by_gamma.end(), 0);
  std::stable_sort(by_gamma.begin(), by_gamma.end(),
                   [&](std::size_t a, std::size_t b) { return rec.gamma[a] > rec.gamma[b]; });
  rec.top_p.assign(by_gamma.begin(), by_gamma.begin() + static_cast<std::ptrdiff_t>(p));
  std::sort(rec.top_p.begin(), rec.top_p.end());  // reference order = descending c
  rec.rate_bound = p < n ? rec.gamma[by_gamma[p]] / rec.gamma[by_gamma[p - 1]] : 0.0;
  for (auto i : rec.top_p) {
    rec.ref_c.push_back(ref.c[i]);
    rec.ref_s.push_back(ref.s[i]);
  }

  std::vector<bool> in_top(n, false);
  for (auto i : rec.top_p) in_top[i] = true;
  const EMat x_full = to_eigen(ref.x_full);
  EMat z2(n, n - p);
  for (std::size_t i = 0, k = 0; i < n; ++i)
    if (!in_top[i]) z2.col(static_cast<Eigen::Index>(k++)) = x_full.col(static_cast<Eigen::Index>(i));

  // Dense H^{±1/2} for β^(k).
  const EMat a = to_eigen(pair.a.to_dense());
  const EMat b = to_eigen(pair.b.to_dense());
  const EMat ata = a.transpose() * a;
  const EMat h = ata + b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<EMat> hes(h);
  const Eigen::VectorXd hsqrt = hes.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const EMat h_half = hes.eigenvectors() * hsqrt.asDiagonal() * hes.eigenvectors().transpose();
  const EMat h_mhalf =
      hes.eigenvectors() * hsqrt.cwiseInverse().asDiagonal() * hes.eigenvectors().transpose();
  const EMat c_op = h_mhalf * ata * h_mhalf;

  const auto h_apply = h_operator(pair);
  for (std::size_t k = 0; k < report.x_history.size(); ++k) {
    const DenseMatrix& xh = report.x_history[k];
    const EMat xe = to_eigen(xh);
    const EMat hx = to_eigen(h_apply(xh));

    // ‖Z₂ᵀHX̂‖ with Z₂ the H-orthonormal complement of X_p.
    rec.eps_k.push_back(largest_singular_value(z2.transpose() * hx));

    const EMat y = h_half * xe;
    const EMat ytc = y.transpose() * c_op;
    rec.beta_k.push_back(largest_singular_value(ytc - (ytc * y) * y.transpose()));

    // Ritz values are descending, as are the X_p reference values; pairing by
    // rank is the optimal matching on |ĉ − c|.
    const auto& ch = report.c_history[k];
    const auto& sh = report.s_history[k];
    std::vector<double> chi, sin_x, sin_u, sin_v, deltas, rc, rs;
    std::vector<bool> inside;
    for (std::size_t r = 0; r < p; ++r) {
      const std::size_t i = rec.top_p[r];
      chi.push_back(chordal_squared(ch[r], sh[r], ref.c[i], ref.s[i]));
      const auto xr = xh.column(r);
      sin_x.push_back(h_angle(xr, ref.x_full.column(i), h_apply).sin);
      const auto ax = spmv(pair.a, xr);
      const auto bx = spmv(pair.b, xr);
      sin_u.push_back(sin_between(ax, ref.u_full.column(i)));
      sin_v.push_back(sin_between(bx, ref.v_full.column(i)));
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < p; ++j)
        if (j != r) dmin = std::min(dmin, std::abs(ref.c[i] * ref.c[i] - ch[j] * ch[j]));
      deltas.push_back(dmin);
      inside.push_back(iv.contains(ref.c[i]));
      rc.push_back(ch[r]);
      rs.push_back(sh[r]);
    }
    rec.chordal_errors.push_back(std::move(chi));
    rec.sin_h_angles.push_back(std::move(sin_x));
    rec.sin_u_angles.push_back(std::move(sin_u));
    rec.sin_v_angles.push_back(std::move(sin_v));
    rec.delta_i.push_back(std::move(deltas));
    rec.in_interval.push_back(std::move(inside));
    rec.ritz_c.push_back(std::move(rc));
    rec.ritz_s.push_back(std::move(rs));
  }
  return rec;
}

}  // namespace cjgsvd
