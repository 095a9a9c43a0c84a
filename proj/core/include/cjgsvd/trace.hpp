#pragma once

// Stochastic trace estimation of the filter and the subspace dimension rule.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cjgsvd/filter.hpp"
#include "cjgsvd/spd_backend.hpp"

namespace cjgsvd {

struct TraceEstimate {
  double h_m = 0.0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_sample;  // z_iᵀPz_i
};

/// H_M = (1/M)Σ z_iᵀPz_i over M Rademacher probes drawn from `seed`.
/// All probes go through one apply_P call, so exactly d·M solves are spent.
TraceEstimate estimate_trace(const SpdBackend& backend, const ChebFilter& filter,
                             std::size_t m, std::uint64_t seed);

/// p = ceil(mu·h_m). Throws NonPositiveEstimate when h_m ≤ 0.
std::size_t select_dimension(double h_m, double mu);

/// M = ceil(8ε⁻²κ(κ + 2ε)/n_gv · ln(2/δ)).
std::size_t sample_bound(double epsilon, double delta, double kappa, double n_gv);

}  // namespace cjgsvd
