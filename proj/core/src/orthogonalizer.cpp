#include "sketchkrylov/orthogonalizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/generators.hpp"

namespace sketchkrylov {

BlockOrthogonalizer::BlockOrthogonalizer(std::size_t rows, std::size_t capacity)
    : q_(rows, capacity), r_(capacity, capacity) {
  if (rows < capacity) {
    throw DimensionError("cannot orthogonalize " + std::to_string(capacity) + " columns in R^" +
                         std::to_string(rows));
  }
}

void BlockOrthogonalizer::append(MatrixView block) {
  if (block.rows != q_.rows()) {
    throw DimensionError("block has " + std::to_string(block.rows) + " rows, basis has " +
                         std::to_string(q_.rows()));
  }
  if (block.cols == 0) throw InvalidArgument("empty block");
  if (cols_ + block.cols > capacity()) {
    throw DimensionError("block of width " + std::to_string(block.cols) + " exceeds the capacity " +
                         std::to_string(capacity()));
  }
  for (std::size_t j = 0; j < block.cols; ++j)
    for (std::size_t i = 0; i < block.rows; ++i)
      if (!std::isfinite(block(i, j))) throw InvalidArgument("block contains non-finite entries");
  append_block(block, cols_);
  cols_ += block.cols;
  widths_.push_back(block.cols);
}

Matrix BlockOrthogonalizer::completion_columns(std::size_t count, std::size_t offset) const {
  return gaussian_matrix(q_.rows(), count, 0x636f6d706c657465ULL, static_cast<std::uint32_t>(offset));
}

std::vector<std::size_t> BlockOrthogonalizer::dependent_columns(MatrixView V, MatrixView W, double coarse_tol,
                                                                std::size_t block) {
  const Matrix R = householder_qr(V).R;
  const double wn = frobenius_norm(W);
  const double fine = static_cast<double>(W.rows) * PrecisionSpec::fine().unit_roundoff() * wn;
  const double tol = std::max(fine, coarse_tol * wn);
  std::vector<std::size_t> out;
  bool exact = true;
  for (std::size_t j = 0; j < V.cols; ++j) {
    const double r = std::abs(R(j, j));
    if (!(r > tol)) out.push_back(j);
    exact = exact && !(r > fine);
  }
  if (out.size() == V.cols) throw DependentBlock(block, "projected block has no independent column", exact);
  return out;
}

BlockQR BlockOrthogonalizer::result() const {
  BlockQR out;
  out.Q = Matrix(basis(), q_.precision());
  out.R = Matrix(r_factor());
  out.partition = partition();
  return out;
}

CertReport certify(MatrixView S, MatrixView P, MatrixView R) {
  if (S.rows != P.rows || S.cols != P.cols || R.rows != S.cols || R.cols != S.cols) {
    throw DimensionError("certify: inconsistent S, P, R shapes");
  }
  const double pn = frobenius_norm(P);
  if (!(pn > 0.0)) throw InvalidArgument("certify: sketched input is zero");
  CertReport c;
  c.delta = orthogonality_loss(S);
  c.delta_tilde = frobenius_norm(subtract_product(P, S, R)) / pn;
  return c;
}

}  // namespace sketchkrylov
