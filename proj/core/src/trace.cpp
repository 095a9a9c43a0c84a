#include "cjgsvd/trace.hpp"

#include <cmath>
#include <numeric>

#include "cjgsvd/error.hpp"
#include "cjgsvd/random.hpp"

namespace cjgsvd {

TraceEstimate estimate_trace(const SpdBackend& backend, const ChebFilter& filter,
                             std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("estimate_trace needs at least one sample");
  const DenseMatrix z = rademacher_block(backend.n(), m, seed);
  const DenseMatrix pz = apply_P(backend, filter, z);

  TraceEstimate est;
  est.m = m;
  est.seed = seed;
  est.per_sample.assign(m, 0.0);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto zi = z.row(i);
    const auto pi = pz.row(i);
    for (std::size_t j = 0; j < m; ++j) est.per_sample[j] += zi[j] * pi[j];
  }
  est.h_m = std::accumulate(est.per_sample.begin(), est.per_sample.end(), 0.0) /
            static_cast<double>(m);
  return est;
}

std::size_t select_dimension(double h_m, double mu) {
  if (!(h_m > 0.0)) throw NonPositiveEstimate(h_m);
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  return static_cast<std::size_t>(std::ceil(mu * h_m));
}

std::size_t sample_bound(double epsilon, double delta, double kappa, double n_gv) {
  if (!(epsilon > 0.0 && delta > 0.0 && delta < 1.0 && kappa > 0.0 && n_gv > 0.0))
    throw InvalidArgument("sample_bound needs positive inputs and delta < 1");
  const double m = 8.0 / (epsilon * epsilon) * kappa * (kappa + 2.0 * epsilon) / n_gv *
                   std::log(2.0 / delta);
  return static_cast<std::size_t>(std::ceil(m));
}

}  // namespace cjgsvd
