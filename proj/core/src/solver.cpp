#include "cjgsvd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cjgsvd/random.hpp"

namespace cjgsvd {
namespace {

void normalize_columns(DenseMatrix& x) {
  std::vector<double> norms(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) norms[j] += xi[j] * xi[j];
  }
  for (auto& v : norms) v = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto xi = x.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) xi[j] *= norms[j];
  }
}

// The in-interval Ritz values kept their count and moved by at most `drift`
// over the last `window` iterations. A spurious value migrating through the
// interval also holds the residual flat, but it keeps moving.
bool settled(const std::vector<IterationRecord>& records, std::size_t window, double drift) {
  const auto& now = records.back().ritz_in_interval;
  for (std::size_t j = records.size() - 1 - window; j + 1 < records.size(); ++j) {
    const auto& then = records[j].ritz_in_interval;
    if (then.size() != now.size()) return false;
    for (std::size_t i = 0; i < now.size(); ++i)
      if (std::abs(now[i] - then[i]) > drift) return false;
  }
  return true;
}

}  // namespace

Extraction extract(const MatrixPair& pair, const DenseMatrix& x_block) {
  if (x_block.rows() != pair.n()) throw DimensionMismatch("extract: X rows != n");
  const std::size_t p = x_block.cols();
  const ThinQr qx = thin_qr(x_block, kRankTolerance, "X");
  const DenseMatrix aq = spmm(pair.a, qx.q);
  const DenseMatrix bq = spmm(pair.b, qx.q);
  if (aq.rows() < p) throw RankDeficient("AQ", aq.rows());
  if (bq.rows() < p) throw RankDeficient("BQ", bq.rows());
  const ThinQr qa = thin_qr(aq, kRankTolerance, "AQ");
  const ThinQr qb = thin_qr(bq, kRankTolerance, "BQ");
  const SmallGsvd g = small_gsvd(qa.r, qb.r);

  Extraction ex;
  ex.x_hat = multiply(qx.q, g.x_bar);
  ex.u_hat = multiply(qa.q, g.u_bar);
  ex.v_hat = multiply(qb.q, g.v_bar);
  ex.quintuples.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    auto& q = ex.quintuples[i];
    q.c_hat = g.c[i];
    q.s_hat = g.s[i];
    q.degenerate = g.degenerate[i];
    q.sigma_infinite = q.s_hat < kDegenerateThreshold;
    q.sigma_hat = q.sigma_infinite ? std::numeric_limits<double>::infinity()
                                   : q.c_hat / q.s_hat;
    q.u_hat = ex.u_hat.column(i);
    q.v_hat = ex.v_hat.column(i);
    q.x_hat = ex.x_hat.column(i);
  }
  return ex;
}

double residual(const MatrixPair& pair, const RitzQuintuple& q) {
  const auto ax = spmv(pair.a, q.x_hat);
  const auto bx = spmv(pair.b, q.x_hat);
  const auto atu = spmv_t(pair.a, q.u_hat);
  const auto btv = spmv_t(pair.b, q.v_hat);
  double sum = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double r = ax[i] - q.c_hat * q.u_hat[i];
    sum += r * r;
  }
  for (std::size_t i = 0; i < bx.size(); ++i) {
    const double r = bx[i] - q.s_hat * q.v_hat[i];
    sum += r * r;
  }
  for (std::size_t i = 0; i < atu.size(); ++i) {
    const double r = q.s_hat * atu[i] - q.c_hat * btv[i];
    sum += r * r;
  }
  return std::sqrt(sum);
}

bool converged(const MatrixPair& pair, const RitzQuintuple& q, double tol) {
  return q.residual_norm <= (q.s_hat * pair.one_norm_a + q.c_hat * pair.one_norm_b) * tol;
}

SolverReport solve(const MatrixPair& pair, const SpdBackend& backend,
                   const SolverConfig& config) {
  const std::size_t n = pair.n();
  if (&backend.pair() != &pair) throw InvalidArgument("backend was built for a different pair");
  if (config.p == 0 || config.p > n) throw InvalidArgument("p must lie in [1, n]");
  if (!(config.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (config.stagnation_window == 0) throw InvalidArgument("stagnation window must be positive");

  DenseMatrix x = config.x0 ? *config.x0 : normal_block(n, config.p, config.seed);
  if (x.rows() != n || x.cols() != config.p)
    throw DimensionMismatch("starting block must be n×p");

  SolverReport report;
  report.config = config;
  const std::uint64_t nls_start = backend.nls();
  std::size_t previous_count = 0;
  const Interval& iv = config.interval;

  for (std::size_t k = 0;; ++k) {
    normalize_columns(x);
    Extraction ex = extract(pair, x);

    IterationRecord rec;
    std::vector<RitzQuintuple> inside;
    for (auto& q : ex.quintuples) {
      q.in_interval = !q.degenerate && iv.contains(q.c_hat);
      if (!q.in_interval) continue;
      q.residual_norm = residual(pair, q);
      rec.ritz_in_interval.push_back(q.c_hat);
      rec.max_residual = std::max(rec.max_residual, q.residual_norm);
      if (converged(pair, q, config.tol)) ++rec.converged_count;
      inside.push_back(q);
    }
    const std::size_t count = rec.ritz_in_interval.size();
    const bool all_converged = rec.converged_count == count;
    report.per_iteration.push_back(rec);
    if (config.keep_history) {
      report.x_history.push_back(ex.x_hat);
      std::vector<double> cs, ss;
      for (const auto& q : ex.quintuples) {
        cs.push_back(q.c_hat);
        ss.push_back(q.s_hat);
      }
      report.c_history.push_back(std::move(cs));
      report.s_history.push_back(std::move(ss));
    }
    report.iterations = k;
    report.nls = backend.nls() - nls_start;
    report.converged = inside;

    if (k >= 1 && all_converged && count == previous_count) return report;
    previous_count = count;

    const std::size_t w = config.stagnation_window;
    if (k >= w) {
      const auto& old = report.per_iteration[k - w];
      if (count > 0 && !old.ritz_in_interval.empty() &&
          rec.max_residual > (1.0 - config.stagnation_improvement) * old.max_residual &&
          settled(report.per_iteration, w,
                  config.stagnation_drift * (config.interval.c_max - config.interval.c_min))) {
        report.converged.clear();
        throw Stagnation(std::move(report));
      }
    }
    if (k == config.max_iters) {
      report.converged.clear();
      throw MaxIterationsExceeded(std::move(report));
    }
    x = apply_P(backend, config.filter, ex.x_hat);
  }
}

}  // namespace cjgsvd
