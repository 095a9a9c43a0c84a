#include "cjgsvd/random.hpp"

#include <cmath>
#include <numbers>

namespace cjgsvd {

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& engine) {
  double u1 = 0.0;
  do {
    u1 = uniform01(engine);
  } while (u1 == 0.0);
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DenseMatrix rademacher_block(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  DenseMatrix z(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) z(i, j) = (engine() >> 63) ? 1.0 : -1.0;
  return z;
}

DenseMatrix normal_block(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  DenseMatrix x(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = standard_normal(engine);
  return x;
}

}  // namespace cjgsvd
