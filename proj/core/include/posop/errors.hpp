#ifndef POSOP_ERRORS_HPP
#define POSOP_ERRORS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace posop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A matrix entry below the clipping threshold was supplied where a
/// positive operator was expected.
class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t row, std::size_t col, double value)
      : Error("NegativeEntry at (" + std::to_string(row) + "," +
              std::to_string(col) + "): " + std::to_string(value)),
        row_(row),
        col_(col),
        value_(value) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t row_;
  std::size_t col_;
  double value_;
};

/// The QR iteration hit its sweep cap. Eigenvalues that had already
/// deflated are kept in partial().
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what,
                std::vector<std::complex<double>> partial)
      : Error(what), partial_(std::move(partial)) {}

  const std::vector<std::complex<double>>& partial() const noexcept {
    return partial_;
  }

 private:
  std::vector<std::complex<double>> partial_;
};

class ReducibleOperator : public Error {
 public:
  using Error::Error;
};

class PowerUnbounded : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

}  // namespace posop

#endif  // POSOP_ERRORS_HPP
