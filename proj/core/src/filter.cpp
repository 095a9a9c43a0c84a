#include "cjgsvd/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cjgsvd/error.hpp"

namespace cjgsvd {

using std::numbers::pi;

SpectralMap::SpectralMap(const Weights& w) : weights_(w) {
  if (!(w.gamma >= 0.0 && w.zeta >= 0.0 && w.eta >= 0.0 && w.xi >= 0.0))
    throw InvalidArgument("weights must be nonnegative");
  if (w.gamma == 0.0 || w.zeta == 0.0)
    throw UnboundedSpectrum(
        "gamma and zeta must both be positive to bound the filtered spectrum");
  if (w.eta == 0.0 && w.xi == 0.0)
    throw InvalidArgument("eta and xi must not both be zero");
  lower_ = -w.xi / w.zeta;
  upper_ = w.eta / w.gamma;
}

double SpectralMap::operator()(double c) const {
  const double c2 = c * c;
  const double s2 = 1.0 - c2;
  if (is_identity() && weights_ == Weights{}) return 2.0 * c2 - 1.0;
  const auto& w = weights_;
  const double lambda = (w.eta * c2 - w.xi * s2) / (w.gamma * c2 + w.zeta * s2);
  return scale() * lambda + shift();
}

double Interval::angle_of(double c) const {
  return std::acos(std::clamp(map(c), -1.0, 1.0));
}

Interval make_interval(double c_min, double c_max, const SpectralMap& map) {
  if (!(c_min > 0.0 && c_min < c_max && c_max < 1.0))
    throw InvalidArgument("interval must satisfy 0 < c_min < c_max < 1");
  Interval iv{c_min, c_max, 0.0, 0.0, map};
  iv.alpha = iv.angle_of(c_min);
  iv.beta = iv.angle_of(c_max);
  return iv;
}

std::vector<double> jackson_factors(std::size_t d) {
  std::vector<double> rho(d + 1);
  const double dp2 = static_cast<double>(d) + 2.0;
  const double theta = pi / dp2;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  for (std::size_t j = 0; j <= d; ++j) {
    const double jj = static_cast<double>(j);
    rho[j] = ((1.0 - jj / dp2) * st * std::cos(jj * theta) +
              (1.0 / dp2) * ct * std::sin(jj * theta)) /
             st;
  }
  return rho;
}

std::vector<double> cheb_step_coeffs(const Interval& interval, std::size_t d) {
  std::vector<double> eta(d + 1);
  eta[0] = (interval.alpha - interval.beta) / pi;
  for (std::size_t j = 1; j <= d; ++j) {
    const double jj = static_cast<double>(j);
    eta[j] = 2.0 / (pi * jj) *
             (std::sin(jj * interval.alpha) - std::sin(jj * interval.beta));
  }
  return eta;
}

ChebFilter make_filter(const Interval& interval, std::size_t d) {
  ChebFilter f{d, jackson_factors(d), interval};
  const auto eta = cheb_step_coeffs(interval, d);
  for (std::size_t j = 0; j <= d; ++j) f.weights[j] *= eta[j];
  return f;
}

double psi_eval(const ChebFilter& filter, double x) {
  x = std::clamp(x, -1.0, 1.0);
  const auto& w = filter.weights;
  double t_prev = 1.0;
  double sum = w[0];
  if (filter.d == 0) return sum;
  double t_cur = x;
  sum += w[1] * t_cur;
  for (std::size_t j = 2; j <= filter.d; ++j) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    sum += w[j] * t_next;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return sum;
}

double step_value(const Interval& interval, double theta) {
  if (theta == interval.alpha || theta == interval.beta) return 0.5;
  return (theta > interval.beta && theta < interval.alpha) ? 1.0 : 0.0;
}

std::size_t select_degree(const Interval& interval, double D) {
  if (!(D >= 1.0 && D <= 10.0))
    throw InvalidArgument("degree multiplier D must lie in [1, 10]");
  const double width = interval.alpha - interval.beta;
  const double raw = std::ceil(D * pi * pi / std::pow(width, 4.0 / 3.0)) - 2.0;
  return raw <= 0.0 ? 0 : static_cast<std::size_t>(raw);
}

double pointwise_bound(std::size_t d, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const double dp2 = static_cast<double>(d) + 2.0;
  return std::pow(pi, 6) / (2.0 * dp2 * dp2 * dp2 * std::pow(delta, 4));
}

std::size_t min_degree_for_separation(double delta_min) {
  if (!(delta_min > 0.0)) throw InvalidArgument("delta_min must be positive");
  const double threshold =
      std::cbrt(2.0) * pi * pi / std::pow(delta_min, 4.0 / 3.0) - 2.0;
  if (threshold < 0.0) return 0;
  return static_cast<std::size_t>(std::floor(threshold)) + 1;
}

}  // namespace cjgsvd
