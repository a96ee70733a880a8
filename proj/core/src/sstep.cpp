#include <cmath>
#include <string>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/krylov.hpp"

namespace sketchkrylov {
namespace {

// A F(:, 0:s) = F T with T of size (s+1) x s.
Matrix recurrence(std::size_t s, const PolynomialBasis& poly) {
  Matrix T(s + 1, s);
  if (poly.kind == PolynomialBasis::Kind::monomial) {
    for (std::size_t j = 0; j < s; ++j) T(j + 1, j) = 1.0;
    return T;
  }
  const double c = 0.5 * (poly.a + poly.b), h = 0.5 * (poly.b - poly.a);
  T(0, 0) = c;
  T(1, 0) = h;
  for (std::size_t j = 1; j < s; ++j) {
    T(j - 1, j) = 0.5 * h;
    T(j, j) = c;
    T(j + 1, j) = 0.5 * h;
  }
  return T;
}

}  // namespace

Matrix matrix_powers(const LinearOperator& A, MatrixView v, std::size_t s, const PolynomialBasis& poly,
                     PrecisionSpec matvec) {
  if (v.cols != 1) throw InvalidArgument("matrix powers kernel takes a single vector");
  if (v.rows != A.dim()) throw DimensionError("vector does not match the operator dimension");
  if (poly.kind == PolynomialBasis::Kind::chebyshev && !(poly.b > poly.a)) {
    throw InvalidArgument("Chebyshev basis needs an interval with a < b");
  }
  const std::size_t n = v.rows;
  Matrix F(n, s + 1);
  F.set_block(0, 0, v);
  const double c = 0.5 * (poly.a + poly.b), h = 0.5 * (poly.b - poly.a);
  for (std::size_t j = 1; j <= s; ++j) {
    const Matrix Av = A.apply(F.columns(j - 1, 1), matvec);
    if (poly.kind == PolynomialBasis::Kind::monomial) {
      F.set_block(0, j, Av);
      continue;
    }
    // p_1 = (x - c) / h, p_(j+1) = 2 (x - c) / h p_j - p_(j-1)
    const double scale = j == 1 ? 1.0 / h : 2.0 / h;
    for (std::size_t i = 0; i < n; ++i) {
      double val = scale * (Av(i, 0) - c * F(i, j - 1));
      if (j > 1) val -= F(i, j - 2);
      F(i, j) = val;
    }
  }
  if (!F.all_finite()) throw ConvergenceError("matrix powers overflowed", s);
  return F;
}

ArnoldiDecomposition sstep_arnoldi(const LinearOperator& A, MatrixView b, const SketchOperator& theta, std::size_t p,
                                   std::size_t s, const PolynomialBasis& poly, const RbgsConfig& cfg,
                                   PrecisionSpec matvec) {
  if (b.cols != 1) throw InvalidArgument("s-step Arnoldi takes a single starting vector");
  if (b.rows != A.dim()) throw DimensionError("starting vector does not match the operator dimension");
  if (p < 2 || s == 0) throw InvalidArgument("s-step Arnoldi needs p >= 2 and s >= 1");
  const std::size_t m = 1 + (p - 1) * s;
  if (m > theta.rows()) throw InvalidArgument("Krylov basis larger than the sketch dimension");

  RbgsProcess orth(b.rows, m, theta, cfg);
  orth.append(b);
  for (std::size_t i = 1; i < p; ++i) {
    const std::size_t last = orth.cols() - 1;
    const Matrix F = matrix_powers(A, orth.basis().columns(last, 1), s, poly, matvec);
    try {
      orth.append(F.columns(1, s));
    } catch (const DependentBlock& e) {
      throw DependentBlock(i, "powers of block " + std::to_string(i) + " (s = " + std::to_string(s) +
                                  ") became numerically dependent: " + e.what());
    }
  }
  BlockQR qr = orth.result();
  const BlockPartition& part = qr.partition;
  const Matrix T = recurrence(s, poly);

  // Theta A F_i(:, 0:s) = [S(:, off-1), P(:, off:off+s)] T and
  // F_i(:, 0:s) = Q C with C upper triangular over the whole run.
  Matrix Y(qr.S.rows(), m - 1);
  Matrix C(m - 1, m - 1);
  for (std::size_t i = 1; i < p; ++i) {
    const std::size_t off = part.offset(i), col = off - 1;
    Matrix sketchF(qr.S.rows(), s + 1);
    sketchF.set_block(0, 0, qr.S.view(0, col, qr.S.rows(), 1));
    sketchF.set_block(0, 1, qr.P.view(0, off, qr.P.rows(), s));
    Y.set_block(0, col, multiply(sketchF, T));
    C(col, col) = 1.0;
    for (std::size_t j = 1; j < s; ++j) {
      for (std::size_t r = 0; r <= col + j; ++r) C(r, col + j) = qr.R(r, off + j - 1);
    }
  }
  const Matrix G = least_squares(qr.S, Y);
  Matrix H = triangular_solve(C, G, Side::right);
  for (std::size_t j = 0; j < H.cols(); ++j) {
    for (std::size_t i = j + 2; i < H.rows(); ++i) H(i, j) = 0.0;
  }

  ArnoldiDecomposition d;
  d.H = std::move(H);
  d.R_first = qr.R.block(0, 0, 1, 1);
  d.Q = std::move(qr.Q);
  d.S = std::move(qr.S);
  d.P = std::move(qr.P);
  d.cert = std::move(qr.cert);
  d.partition = std::move(qr.partition);
  return d;
}

}  // namespace sketchkrylov
