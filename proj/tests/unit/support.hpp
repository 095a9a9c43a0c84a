#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cjgsvd/dense.hpp"
#include "cjgsvd/random.hpp"
#include "cjgsvd/sparse.hpp"

namespace cjgsvd::testing {

inline MatrixPair diagonal_pair(std::vector<double> c, std::size_t pad_a = 0,
                                std::size_t pad_b = 0) {
  TestPairSpec spec;
  spec.kind = TestPairSpec::Kind::diagonal;
  spec.c = std::move(c);
  spec.pad_a = pad_a;
  spec.pad_b = pad_b;
  return gen_test_pair(spec);
}

inline MatrixPair random_pair(std::size_t n, std::size_t m1, double density,
                              std::uint64_t seed, BKind kind = BKind::b0) {
  TestPairSpec spec;
  spec.kind = TestPairSpec::Kind::random;
  spec.n = n;
  spec.m1 = m1;
  spec.density = density;
  spec.seed = seed;
  spec.b_kind = kind;
  return gen_test_pair(spec);
}

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return normal_block(rows, cols, seed);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return max_abs(subtract(a, b));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// xᵀ·H·x − I in max-abs for H = AᵀA + BᵀB.
inline double h_orthonormality_error(const MatrixPair& pair, const DenseMatrix& x) {
  const DenseMatrix ax = spmm(pair.a, x);
  const DenseMatrix bx = spmm(pair.b, x);
  DenseMatrix g = multiply_tn(ax, ax);
  const DenseMatrix gb = multiply_tn(bx, bx);
  double err = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      err = std::max(err, std::abs(g(i, j) + gb(i, j) - (i == j ? 1.0 : 0.0)));
  return err;
}

}  // namespace cjgsvd::testing
