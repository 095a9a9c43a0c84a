#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cjgsvd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A column of a QR input collapsed below the relative rank tolerance.
/// `stage` names the block being factored ("X", "AQ", "BQ" or "dense").
class RankDeficient : public Error {
 public:
  RankDeficient(std::string stage, std::size_t index)
      : Error("rank deficient " + stage + " block at column " +
              std::to_string(index)),
        stage_(std::move(stage)),
        index_(index) {}

  const std::string& stage() const noexcept { return stage_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::string stage_;
  std::size_t index_;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (pivot " +
              std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, std::size_t iterations,
                double residual)
      : Error(what + " did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedField : public Error {
 public:
  using Error::Error;
};

class DenseCeilingExceeded : public Error {
 public:
  DenseCeilingExceeded(std::size_t n, std::size_t ceiling)
      : Error("dimension " + std::to_string(n) + " exceeds dense ceiling " +
              std::to_string(ceiling)) {}
};

class NonPositiveEstimate : public Error {
 public:
  explicit NonPositiveEstimate(double estimate)
      : Error("trace estimate " + std::to_string(estimate) +
              " is not positive; the interval is probably empty"),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// The weighted operator has no finite spectral enclosure, so a Chebyshev
/// filter cannot be mapped onto it (one of gamma, zeta is zero).
class UnboundedSpectrum : public Error {
 public:
  using Error::Error;
};

}  // namespace cjgsvd
