#include "sketchkrylov/linear_operator.hpp"

#include <cmath>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {

LinearOperator::LinearOperator(std::size_t dim, ApplyFn fn, std::string description)
    : dim_(dim), fn_(std::move(fn)), description_(std::move(description)) {
  if (!fn_) throw InvalidArgument("linear operator needs an apply function");
}

LinearOperator LinearOperator::dense(Matrix A) {
  if (A.rows() != A.cols()) throw DimensionError("dense operator must be square");
  A.require_finite("operator");
  auto shared = std::make_shared<const Matrix>(std::move(A));
  const std::size_t n = shared->rows();
  return LinearOperator(
      n, [shared](MatrixView X, PrecisionSpec prec) { return multiply(*shared, X, prec); }, "dense");
}

LinearOperator LinearOperator::sparse(CsrMatrix A) {
  if (A.rows() != A.cols()) throw DimensionError("sparse operator must be square");
  auto shared = std::make_shared<const CsrMatrix>(std::move(A));
  const std::size_t n = shared->rows();
  return LinearOperator(
      n, [shared](MatrixView X, PrecisionSpec prec) { return shared->multiply(X, prec); }, "sparse");
}

LinearOperator LinearOperator::diagonal(std::vector<double> d) {
  for (double v : d)
    if (!std::isfinite(v)) throw InvalidArgument("diagonal operator contains non-finite entries");
  auto shared = std::make_shared<const std::vector<double>>(std::move(d));
  const std::size_t n = shared->size();
  return LinearOperator(
      n,
      [shared](MatrixView X, PrecisionSpec prec) {
        Matrix Y(X.rows, X.cols, prec);
        for (std::size_t j = 0; j < X.cols; ++j)
          for (std::size_t i = 0; i < X.rows; ++i) {
            Y(i, j) = prec.is_coarse()
                          ? static_cast<double>(static_cast<float>((*shared)[i]) * static_cast<float>(X(i, j)))
                          : (*shared)[i] * X(i, j);
          }
        return Y;
      },
      "diagonal");
}

LinearOperator LinearOperator::shifted(LinearOperator A, double alpha, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("shift sign must be +1 or -1");
  const std::size_t n = A.dim();
  std::string desc = std::to_string(alpha) + (sign > 0 ? " I + " : " I - ") + A.description();
  return LinearOperator(
      n,
      [A = std::move(A), alpha, sign](MatrixView X, PrecisionSpec prec) {
        Matrix Y = A.apply(X, prec);
        for (std::size_t j = 0; j < X.cols; ++j)
          for (std::size_t i = 0; i < X.rows; ++i) {
            if (prec.is_coarse()) {
              const float v = static_cast<float>(alpha) * static_cast<float>(X(i, j)) +
                              static_cast<float>(sign) * static_cast<float>(Y(i, j));
              Y(i, j) = static_cast<double>(v);
            } else {
              Y(i, j) = alpha * X(i, j) + sign * Y(i, j);
            }
          }
        return Y;
      },
      desc);
}

LinearOperator LinearOperator::composed(LinearOperator A, LinearOperator M) {
  if (A.dim() != M.dim()) throw DimensionError("composed operators must have equal dimensions");
  const std::size_t n = A.dim();
  std::string desc = A.description() + " * " + M.description();
  return LinearOperator(
      n,
      [A = std::move(A), M = std::move(M)](MatrixView X, PrecisionSpec prec) {
        return A.apply(M.apply(X, prec), prec);
      },
      desc);
}

Matrix LinearOperator::apply(MatrixView X, PrecisionSpec prec) const {
  if (!fn_) throw InvalidArgument("operator is not initialized");
  if (X.rows != dim_) {
    throw DimensionError("operator acts on R^" + std::to_string(dim_) + " but input has " +
                         std::to_string(X.rows) + " rows");
  }
  Matrix Y = fn_(X, prec);
  if (Y.rows() != dim_ || Y.cols() != X.cols) throw DimensionError("operator returned a block of the wrong shape");
  return Y;
}

Matrix LinearOperator::to_dense() const { return apply(Matrix::identity(dim_)); }

}  // namespace sketchkrylov
