#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sketchkrylov/matrix.hpp"
#include "sketchkrylov/sparse.hpp"

namespace sketchkrylov {

// Square linear map on R^n applied to blocks of vectors.
class LinearOperator {
 public:
  using ApplyFn = std::function<Matrix(MatrixView, PrecisionSpec)>;

  LinearOperator() = default;
  LinearOperator(std::size_t dim, ApplyFn fn, std::string description = "operator");

  static LinearOperator dense(Matrix A);
  static LinearOperator sparse(CsrMatrix A);
  static LinearOperator diagonal(std::vector<double> d);
  // alpha I + sign A with sign = +1 or -1.
  static LinearOperator shifted(LinearOperator A, double alpha, int sign);
  // x -> A(M x).
  static LinearOperator composed(LinearOperator A, LinearOperator M);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& description() const noexcept { return description_; }
  Matrix apply(MatrixView X, PrecisionSpec prec = PrecisionSpec::fine()) const;
  Matrix to_dense() const;

 private:
  std::size_t dim_ = 0;
  ApplyFn fn_;
  std::string description_;
};

}  // namespace sketchkrylov
