#pragma once

// Solvers for the weighted SPD system (γAᵀA + ζBᵀB) y = rhs, the operator
// S = (γAᵀA + ζBᵀB)⁻¹(ηAᵀA − ξBᵀB) and the filter P = ψ_d(S).

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/filter.hpp"
#include "cjgsvd/sparse.hpp"

namespace cjgsvd {

enum class SolveMode { dense_cholesky, cg, lsqr };

inline constexpr std::size_t kDenseCeiling = 2000;

struct BackendOptions {
  Weights weights{};
  SolveMode mode = SolveMode::dense_cholesky;
  double solve_tol = 1e-14;
  /// 0 picks a default from n.
  std::size_t max_solve_iters = 0;
  std::size_t dense_ceiling = kDenseCeiling;
};

/// Holds a reference to the pair; the pair must outlive the backend.
/// Solves are const and may run concurrently; the solve counter is atomic.
class SpdBackend {
 public:
  const MatrixPair& pair() const noexcept { return *pair_; }
  const Weights& weights() const noexcept { return weights_; }
  SolveMode mode() const noexcept { return mode_; }
  double solve_tol() const noexcept { return solve_tol_; }
  std::size_t max_solve_iters() const noexcept { return max_solve_iters_; }
  std::size_t n() const noexcept { return pair_->n(); }

  /// Lower Cholesky factor of γAᵀA + ζBᵀB (dense-cholesky mode), stored
  /// sparsely with exact zeros dropped.
  const std::optional<SparseMatrix>& factor() const noexcept { return factor_; }

  /// Number of completed linear solves.
  std::uint64_t nls() const noexcept { return nls_->load(); }

 private:
  friend SpdBackend make_backend(const MatrixPair&, const BackendOptions&);
  friend class SpdBackendAccess;

  SpdBackend() : nls_(std::make_unique<std::atomic<std::uint64_t>>(0)) {}

  const MatrixPair* pair_ = nullptr;
  Weights weights_{};
  SolveMode mode_ = SolveMode::dense_cholesky;
  double solve_tol_ = 1e-14;
  std::size_t max_solve_iters_ = 0;
  std::optional<SparseMatrix> factor_;
  std::unique_ptr<std::atomic<std::uint64_t>> nls_;
};

/// Throws NotPositiveDefinite for (γ, ζ) = (0, 0) or a singular system,
/// InvalidArgument for (η, ξ) = (0, 0) or negative weights and
/// DenseCeilingExceeded in dense-cholesky mode when n exceeds the ceiling.
SpdBackend make_backend(const MatrixPair& pair, const BackendOptions& options = {});

/// y with ‖(γAᵀA + ζBᵀB)y − rhs‖ ≤ solve_tol·‖rhs‖. One solve is counted
/// per right-hand side (per column for blocks).
std::vector<double> solve_spd(const SpdBackend& backend, std::span<const double> rhs);
DenseMatrix solve_spd(const SpdBackend& backend, const DenseMatrix& rhs);

/// y = (γAᵀA + ζBᵀB)⁻¹(ηAᵀA − ξBᵀB)z, one solve per column.
std::vector<double> apply_S(const SpdBackend& backend, std::span<const double> z);
DenseMatrix apply_S(const SpdBackend& backend, const DenseMatrix& z);

/// Y = Σ_j w_j T_j(Ŝ)Z, where Ŝ is S rescaled onto [−1, 1] (Ŝ = S for the
/// default weights). Costs exactly d·p solves. The filter must have been built
/// for the backend's weights.
DenseMatrix apply_P(const SpdBackend& backend, const ChebFilter& filter,
                    const DenseMatrix& z);

}  // namespace cjgsvd
