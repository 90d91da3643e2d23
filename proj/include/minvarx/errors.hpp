#pragma once

#include <stdexcept>
#include <string>

namespace minvarx {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid structure parameters or arguments that do not fit the problem size.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must have full rank does not.
class RankError : public Error {
 public:
  RankError(const std::string& what, int rank, int expected)
      : Error(what), rank_(rank), expected_(expected) {}

  int rank() const noexcept { return rank_; }
  int expected() const noexcept { return expected_; }

 private:
  int rank_;
  int expected_;
};

/// Malformed or insufficient input data (shapes, sample counts, parse failures).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A quantity left its mathematical domain (log of a non-positive determinant,
/// non-positive-definite Gram matrix, unstable recursion).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace minvarx
