#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sketchkrylov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Cholesky pivot was not positive. `column()` is zero-based, the message
// reports it one-based.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t column)
      : Error("matrix is not positive definite at column " + std::to_string(column + 1)),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// Exactly zero (or numerically negligible) pivot in a triangular factor.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// A block (zero-based index) became numerically dependent on the previous ones.
class DependentBlock : public Error {
 public:
  // `exact` is false when the block is only dependent to the accuracy of
  // the coarse arithmetic.
  explicit DependentBlock(std::size_t block, const std::string& detail = {}, bool exact = true)
      : Error("block " + std::to_string(block) + " is numerically dependent" +
              (detail.empty() ? std::string() : ": " + detail)),
        block_(block),
        exact_(exact) {}
  std::size_t block() const noexcept { return block_; }
  bool exact() const noexcept { return exact_; }

 private:
  std::size_t block_;
  bool exact_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sketchkrylov
