#pragma once

// Filtered subspace iteration for the generalized singular values of (A, B)
// inside [c_min, c_max], with Ritz extraction from the projected pair.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/error.hpp"
#include "cjgsvd/filter.hpp"
#include "cjgsvd/sparse.hpp"
#include "cjgsvd/spd_backend.hpp"

namespace cjgsvd {

struct RitzQuintuple {
  double c_hat = 0.0;
  double s_hat = 1.0;
  double sigma_hat = 0.0;  // c_hat / s_hat; +inf when sigma_infinite
  bool sigma_infinite = false;
  std::vector<double> u_hat;  // length m1, zero when c_hat is degenerate
  std::vector<double> v_hat;  // length m2, zero when s_hat is degenerate
  std::vector<double> x_hat;  // length n
  double residual_norm = 0.0;
  bool in_interval = false;
  bool degenerate = false;
};

struct Extraction {
  std::vector<RitzQuintuple> quintuples;  // descending c_hat
  DenseMatrix x_hat;                      // n×p, H-orthonormal
  DenseMatrix u_hat;                      // m1×p
  DenseMatrix v_hat;                      // m2×p
};

/// QR of X, AQ and BQ, GSVD of the projected pair and the lifted Ritz
/// vectors. Residuals and interval flags are left unset. Throws RankDeficient
/// with stage "X", "AQ" or "BQ".
Extraction extract(const MatrixPair& pair, const DenseMatrix& x_block);

/// ‖[Ax̂ − ĉû; Bx̂ − ŝv̂; ŝAᵀû − ĉBᵀv̂]‖₂.
double residual(const MatrixPair& pair, const RitzQuintuple& q);

/// residual_norm ≤ (ŝ‖A‖₁ + ĉ‖B‖₁)·tol, inclusive.
bool converged(const MatrixPair& pair, const RitzQuintuple& q, double tol);

struct SolverConfig {
  Interval interval;
  ChebFilter filter;
  std::size_t p = 1;
  double tol = 1e-8;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  std::size_t stagnation_window = 5;
  /// Minimum relative drop of the largest in-interval residual over the
  /// stagnation window.
  double stagnation_improvement = 0.01;
  /// Stagnation also needs the in-interval Ritz values to have settled: same
  /// count and no value moving by more than this fraction of c_max − c_min
  /// over the window.
  double stagnation_drift = 0.02;
  /// Keep X̂ and the Ritz values of every iteration in the report.
  bool keep_history = false;
  /// Starting block; a seeded standard normal block when absent.
  std::optional<DenseMatrix> x0;
};

struct IterationRecord {
  std::vector<double> ritz_in_interval;  // ĉ values inside the interval
  double max_residual = 0.0;             // over in-interval quintuples
  std::size_t converged_count = 0;
};

struct SolverReport {
  std::size_t iterations = 0;  // k_c, number of filter applications
  std::uint64_t nls = 0;       // solves spent by the iteration
  std::vector<IterationRecord> per_iteration;
  std::vector<RitzQuintuple> converged;  // descending c_hat
  std::optional<double> estimated_ngv;
  SolverConfig config;

  // Filled only with keep_history.
  std::vector<DenseMatrix> x_history;
  std::vector<std::vector<double>> c_history;
  std::vector<std::vector<double>> s_history;
};

/// The largest in-interval residual stopped improving while the in-interval
/// Ritz values stood still; p is probably smaller than the number of values
/// in the interval.
class Stagnation : public Error {
 public:
  explicit Stagnation(SolverReport report)
      : Error("subspace iteration stagnated after " +
              std::to_string(report.iterations) +
              " iterations; p is probably smaller than the number of values in "
              "the interval (increase mu or the degree)"),
        report_(std::move(report)) {}
  const SolverReport& report() const noexcept { return report_; }

 private:
  SolverReport report_;
};

class MaxIterationsExceeded : public Error {
 public:
  explicit MaxIterationsExceeded(SolverReport report)
      : Error("no convergence within " + std::to_string(report.iterations) +
              " iterations"),
        report_(std::move(report)) {}
  const SolverReport& report() const noexcept { return report_; }

 private:
  SolverReport report_;
};

/// Runs the iteration until every in-interval Ritz approximation has
/// converged and the in-interval count matches the previous iteration.
SolverReport solve(const MatrixPair& pair, const SpdBackend& backend,
                   const SolverConfig& config);

}  // namespace cjgsvd
