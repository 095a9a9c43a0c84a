#pragma once

// Filter eigenvalue separation and per-iteration convergence measurements
// against a dense reference GSVD.

#include <cstddef>
#include <vector>

#include "cjgsvd/filter.hpp"
#include "cjgsvd/oracle.hpp"
#include "cjgsvd/solver.hpp"

namespace cjgsvd {

enum class ValueClass { interior, boundary, exterior };

struct FilterSpectrum {
  std::vector<double> gamma;      // ψ_d(map(c_i)) in reference order
  std::vector<ValueClass> classes;
  bool ordering_ok = false;       // interior > 3/4, boundary in (1/4, 3/4), exterior < 1/4
  double delta_min = 0.0;         // smallest angular gap to an interval end
  std::size_t min_degree = 0;     // min_degree_for_separation(delta_min)
  bool degree_sufficient = false; // filter.d ≥ min_degree
  double max_step_error = 0.0;    // max_i |h(θ_i) − γ_i|
};

/// Values within `boundary_tol` of c_min or c_max count as boundary values
/// and are left out of the gap computation.
FilterSpectrum filter_spectrum(const ChebFilter& filter, const GsvdReference& ref,
                               double boundary_tol = 1e-12);

struct DiagnosticsRecord {
  std::vector<double> gamma;       // filter eigenvalues, reference order
  std::vector<std::size_t> top_p;  // reference indices of the p largest γ
  double rate_bound = 0.0;         // γ_{p+1}/γ_p
  std::vector<double> eps_k;       // dist(span X̂^(k), span X_p)
  // Per iteration, one entry per reference value of X_p (descending c),
  // paired with the Ritz value of the same rank.
  std::vector<std::vector<double>> chordal_errors;
  std::vector<std::vector<double>> sin_h_angles;
  std::vector<std::vector<double>> sin_u_angles;
  std::vector<std::vector<double>> sin_v_angles;
  std::vector<std::vector<double>> delta_i;
  std::vector<std::vector<bool>> in_interval;  // whether the reference value is
  std::vector<std::vector<double>> ritz_c;     // paired ĉ values
  std::vector<std::vector<double>> ritz_s;
  std::vector<double> beta_k;
  std::vector<double> ref_c;  // c of X_p, descending
  std::vector<double> ref_s;
};

/// Needs a report produced with keep_history. Throws DenseCeilingExceeded
/// for n above the ceiling and InvalidArgument without history.
DiagnosticsRecord convergence_diagnostics(const MatrixPair& pair,
                                          const SolverReport& report,
                                          const GsvdReference& ref,
                                          const ChebFilter& filter,
                                          std::size_t dense_ceiling = 2000);

}  // namespace cjgsvd
