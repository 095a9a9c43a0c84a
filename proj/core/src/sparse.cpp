#include "cjgsvd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cjgsvd/error.hpp"
#include "cjgsvd/random.hpp"

namespace cjgsvd {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != values_.size() ||
      col_indices_.size() != values_.size())
    throw InvalidArgument("inconsistent CSR arrays");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1])
      throw InvalidArgument("CSR row offsets are not monotone");
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= cols_)
        throw InvalidArgument("CSR column index out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
        throw InvalidArgument("CSR column indices not strictly increasing");
      if (!std::isfinite(values_[k]))
        throw InvalidArgument("non-finite value in sparse matrix");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= rows || t.col >= cols)
      throw InvalidArgument("triplet index out of range");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals;
  cols_out.reserve(entries.size());
  vals.reserve(entries.size());
  std::size_t prev_row = rows;
  std::size_t prev_col = cols;
  for (const auto& t : entries) {
    if (t.row == prev_row && t.col == prev_col) {
      vals.back() += t.value;
      continue;
    }
    cols_out.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
    prev_row = t.row;
    prev_col = t.col;
  }
  for (std::size_t i = 0; i < rows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out),
                      std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                      std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  std::vector<std::size_t> offsets(m.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        cols.push_back(j);
        vals.push_back(m(i, j));
      }
    }
    offsets[i + 1] = vals.size();
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(offsets), std::move(cols),
                      std::move(vals));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      d(i, col_indices_[k]) = values_[k];
  return d;
}

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw DimensionMismatch("spmv");
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[idx[k]];
    y[i] = s;
  }
  return y;
}

std::vector<double> spmv_t(const SparseMatrix& m, std::span<const double> x) {
  if (x.size() != m.rows()) throw DimensionMismatch("spmv_t");
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  std::vector<double> y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) y[idx[k]] += val[k] * xi;
  }
  return y;
}

DenseMatrix spmm(const SparseMatrix& m, const DenseMatrix& x) {
  if (x.rows() != m.cols()) throw DimensionMismatch("spmm");
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  DenseMatrix y(m.rows(), x.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto yi = y.row(i);
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      const double v = val[k];
      auto xr = x.row(idx[k]);
      for (std::size_t j = 0; j < x.cols(); ++j) yi[j] += v * xr[j];
    }
  }
  return y;
}

DenseMatrix spmm_t(const SparseMatrix& m, const DenseMatrix& x) {
  if (x.rows() != m.rows()) throw DimensionMismatch("spmm_t");
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  DenseMatrix y(m.cols(), x.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto xi = x.row(i);
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      const double v = val[k];
      auto yr = y.row(idx[k]);
      for (std::size_t j = 0; j < x.cols(); ++j) yr[j] += v * xi[j];
    }
  }
  return y;
}

double one_norm(const SparseMatrix& m) {
  std::vector<double> sums(m.cols(), 0.0);
  const auto idx = m.col_indices();
  const auto val = m.values();
  for (std::size_t k = 0; k < m.nnz(); ++k) sums[idx[k]] += std::abs(val[k]);
  return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

DenseMatrix gram(const SparseMatrix& m) {
  DenseMatrix g(m.cols(), m.cols());
  const auto off = m.row_offsets();
  const auto idx = m.col_indices();
  const auto val = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t a = off[i]; a < off[i + 1]; ++a) {
      const double va = val[a];
      auto ga = g.row(idx[a]);
      for (std::size_t b = off[i]; b < off[i + 1]; ++b) ga[idx[b]] += va * val[b];
    }
  return g;
}

SparseMatrix gen_b(BKind kind, std::size_t n) {
  if (n < 2) throw InvalidArgument("gen_b needs n >= 2");
  std::vector<Triplet> t;
  if (kind == BKind::b0) {
    t.reserve(3 * n - 2);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) t.push_back({i, i - 1, 1.0});
      t.push_back({i, i, 3.0});
      if (i + 1 < n) t.push_back({i, i + 1, 1.0});
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
  }
  t.reserve(2 * (n - 1));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.push_back({i, i, 1.0});
    t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n - 1, n, std::move(t));
}

MatrixPair make_pair(SparseMatrix a, SparseMatrix b) {
  if (a.cols() != b.cols())
    throw DimensionMismatch("A and B must have the same number of columns");
  MatrixPair pair{std::move(a), std::move(b), 0.0, 0.0};
  pair.one_norm_a = one_norm(pair.a);
  pair.one_norm_b = one_norm(pair.b);
  return pair;
}

MatrixPair gen_test_pair(const TestPairSpec& spec) {
  if (spec.kind == TestPairSpec::Kind::diagonal) {
    const std::size_t n = spec.c.size();
    if (n == 0) throw InvalidArgument("diagonal test pair needs c values");
    std::vector<Triplet> ta, tb;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = spec.c[i];
      if (!(c >= 0.0 && c <= 1.0))
        throw InvalidArgument("diagonal test pair: c values must lie in [0,1]");
      const double s = std::sqrt(1.0 - c * c);
      if (c != 0.0) ta.push_back({i, i, c});
      if (s != 0.0) tb.push_back({i, i, s});
    }
    return make_pair(SparseMatrix::from_triplets(n + spec.pad_a, n, std::move(ta)),
                     SparseMatrix::from_triplets(n + spec.pad_b, n, std::move(tb)));
  }

  if (spec.n < 2 || spec.m1 == 0 || !(spec.density > 0.0 && spec.density <= 1.0))
    throw InvalidArgument("random test pair needs n >= 2, m1 >= 1, density in (0,1]");
  std::mt19937_64 engine(spec.seed);
  std::vector<Triplet> ta;
  for (std::size_t i = 0; i < spec.m1; ++i)
    for (std::size_t j = 0; j < spec.n; ++j)
      if (uniform01(engine) < spec.density)
        ta.push_back({i, j, standard_normal(engine)});
  return make_pair(SparseMatrix::from_triplets(spec.m1, spec.n, std::move(ta)),
                   gen_b(spec.b_kind, spec.n));
}

}  // namespace cjgsvd
