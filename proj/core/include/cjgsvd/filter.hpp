#pragma once

// Chebyshev–Jackson approximation of the interval step function and the
// degree / error-bound calculators that go with it.

#include <cstddef>
#include <vector>

namespace cjgsvd {

/// Weights of the SPD system (γAᵀA + ζBᵀB) y = (ηAᵀA − ξBᵀB) q.
struct Weights {
  double gamma = 1.0;
  double zeta = 1.0;
  double eta = 1.0;
  double xi = 1.0;

  friend bool operator==(const Weights&, const Weights&) = default;
};

/// Maps a generalized singular value c ∈ [0,1] to the eigenvalue of the
/// weighted operator, rescaled onto [−1,1]. With the default weights this is
/// l(c) = 2c² − 1. The map is increasing in c whenever γ, ζ > 0.
class SpectralMap {
 public:
  SpectralMap() = default;
  /// Throws UnboundedSpectrum when γ or ζ is zero.
  explicit SpectralMap(const Weights& w);

  double operator()(double c) const;

  /// Spectral enclosure [lower, upper] of the unscaled weighted operator.
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  /// Affine rescaling x = scale·λ + shift that sends [lower, upper] to [−1,1].
  double scale() const noexcept { return 2.0 / (upper_ - lower_); }
  double shift() const noexcept { return -(upper_ + lower_) / (upper_ - lower_); }
  bool is_identity() const noexcept { return lower_ == -1.0 && upper_ == 1.0; }

  const Weights& weights() const noexcept { return weights_; }

  friend bool operator==(const SpectralMap&, const SpectralMap&) = default;

 private:
  Weights weights_{};
  double lower_ = -1.0;
  double upper_ = 1.0;
};

/// Target interval [c_min, c_max] ⊂ (0,1) and its angular endpoints
/// alpha = arccos(map(c_min)) > beta = arccos(map(c_max)).
struct Interval {
  double c_min = 0.0;
  double c_max = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  SpectralMap map{};

  bool contains(double c) const noexcept { return c >= c_min && c <= c_max; }
  double angle_of(double c) const;
};

/// Throws InvalidArgument unless 0 < c_min < c_max < 1.
Interval make_interval(double c_min, double c_max, const SpectralMap& map = {});

struct ChebFilter {
  std::size_t d = 0;
  std::vector<double> weights;  // w_j = rho_{j,d} · eta_j
  Interval interval;
};

/// Jackson damping factors rho_{0..d,d}.
std::vector<double> jackson_factors(std::size_t d);

/// Chebyshev coefficients eta_{0..d} of the indicator of [beta, alpha] in
/// angle: eta_0 = (α−β)/π, eta_j = 2(sin jα − sin jβ)/(πj).
std::vector<double> cheb_step_coeffs(const Interval& interval, std::size_t d);

ChebFilter make_filter(const Interval& interval, std::size_t d);

/// psi_d(x) by the three-term recurrence; x is clamped to [−1,1].
double psi_eval(const ChebFilter& filter, double x);

/// Step function h at angle theta: 1 strictly inside (beta, alpha), 1/2 at
/// either endpoint, 0 outside.
double step_value(const Interval& interval, double theta);

/// d = ceil(D·π² / (α−β)^{4/3}) − 2, D ∈ [1,10].
std::size_t select_degree(const Interval& interval, double D);

/// π⁶ / (2 (d+2)³ Δ⁴).
double pointwise_bound(std::size_t d, double delta);

/// Smallest d with d > ∛2·π² / Δ_min^{4/3} − 2.
std::size_t min_degree_for_separation(double delta_min);

}  // namespace cjgsvd
