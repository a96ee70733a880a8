#pragma once

#include <iosfwd>
#include <string>

#include "sketchkrylov/matrix.hpp"
#include "sketchkrylov/sparse.hpp"

namespace sketchkrylov {

// Contents of a Matrix Market file. Coordinate files fill `sparse`, array
// files fill `dense`; symmetric storage is expanded on read.
struct MatrixMarketData {
  bool coordinate = false;
  bool symmetric = false;
  Matrix dense;
  CsrMatrix sparse;

  std::size_t rows() const noexcept { return coordinate ? sparse.rows() : dense.rows(); }
  std::size_t cols() const noexcept { return coordinate ? sparse.cols() : dense.cols(); }
  Matrix to_dense() const { return coordinate ? sparse.to_dense() : dense; }
  CsrMatrix to_sparse() const { return coordinate ? sparse : CsrMatrix::from_dense(dense); }
};

// Supports "matrix array real general" and "matrix coordinate real
// {general,symmetric}" (integer fields are read as real). Throws ParseError
// with the 1-based line number.
MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData load_matrix_market(const std::string& path);

// Values are written with format_double, so reading back is exact.
void write_matrix_market(std::ostream& out, MatrixView A);
void write_matrix_market(std::ostream& out, const CsrMatrix& A);
void save_matrix_market(const std::string& path, MatrixView A);
void save_matrix_market(const std::string& path, const CsrMatrix& A);

}  // namespace sketchkrylov
