#include "sketchkrylov/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sketchkrylov/error.hpp"

namespace sketchkrylov {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size()) {
    throw DimensionError("inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw InvalidArgument("CSR row pointers must be nondecreasing");
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= cols_) throw DimensionError("CSR column index out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw InvalidArgument("CSR column indices must be sorted and unique within a row");
      }
      if (!std::isfinite(values_[p])) throw InvalidArgument("CSR matrix contains non-finite entries");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row >= rows || t.col >= cols) {
      throw DimensionError("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> ptr(rows + 1, 0), idx;
  std::vector<double> val;
  idx.reserve(entries.size());
  val.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const Triplet& t = entries[e];
    if (e > 0 && entries[e - 1].row == t.row && entries[e - 1].col == t.col) {
      val.back() += t.value;
      continue;
    }
    idx.push_back(t.col);
    val.push_back(t.value);
    ++ptr[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) ptr[i + 1] += ptr[i];
  return CsrMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

CsrMatrix CsrMatrix::from_dense(MatrixView A) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      if (A(i, j) != 0.0) t.push_back({i, j, A(i, j)});
  return from_triplets(A.rows, A.cols, std::move(t));
}

namespace {
template <class T>
void spmm(const CsrMatrix& A, MatrixView X, Matrix& Y) {
  const auto& ptr = A.row_ptr();
  const auto& idx = A.col_idx();
  const auto& val = A.values();
  for (std::size_t j = 0; j < X.cols; ++j) {
    const double* x = X.col(j);
    double* y = Y.col(j);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      T acc = 0;
      for (std::size_t p = ptr[i]; p < ptr[i + 1]; ++p) {
        acc = acc + static_cast<T>(val[p]) * static_cast<T>(x[idx[p]]);
      }
      y[i] = static_cast<double>(acc);
    }
  }
}
}  // namespace

Matrix CsrMatrix::multiply(MatrixView X, PrecisionSpec prec) const {
  if (X.rows != cols_) {
    throw DimensionError("sparse product: matrix is " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                         " but input has " + std::to_string(X.rows) + " rows");
  }
  Matrix Y(rows_, X.cols, prec);
  if (prec.is_coarse()) spmm<float>(*this, X, Y);
  else spmm<double>(*this, X, Y);
  return Y;
}

Matrix CsrMatrix::to_dense() const {
  Matrix D(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) D(i, col_idx_[p]) = values_[p];
  return D;
}

std::vector<Triplet> CsrMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) t.push_back({i, col_idx_[p], values_[p]});
  return t;
}

}  // namespace sketchkrylov
