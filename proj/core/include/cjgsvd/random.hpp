#pragma once

// Seeded random blocks. Everything is drawn from std::mt19937_64, whose output
// sequence is fixed by the standard, and transformed without the
// implementation-defined std:: distributions, so a seed reproduces the same
// numbers on every platform.

#include <cstdint>
#include <random>

#include "cjgsvd/dense.hpp"

namespace cjgsvd {

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& engine);

/// Standard normal deviate (Box–Muller, one value per call).
double standard_normal(std::mt19937_64& engine);

/// n×m block of independent ±1 entries, drawn column by column.
DenseMatrix rademacher_block(std::size_t n, std::size_t m, std::uint64_t seed);

/// n×p block of independent standard normal entries, drawn column by column.
DenseMatrix normal_block(std::size_t n, std::size_t p, std::uint64_t seed);

}  // namespace cjgsvd
