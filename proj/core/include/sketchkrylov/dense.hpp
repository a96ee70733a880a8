#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sketchkrylov/matrix.hpp"

namespace sketchkrylov {

enum class Trans { no, yes };
enum class Side { left, right };

// C_out = alpha * op(A) op(B) + beta * C.
//
// Every entry is accumulated as acc = 0; acc = acc + a*b for l = 0, 1, ...
// in the working precision with no fused multiply-add, then scaled. With a
// coarse spec the inputs are rounded to binary32 first, so the result is
// bit-identical to a plain binary32 triple loop. C is ignored when beta == 0
// and may then be an empty view.
Matrix gemm(double alpha, MatrixView A, MatrixView B, double beta, MatrixView C,
            PrecisionSpec prec = PrecisionSpec::fine(), Trans ta = Trans::no, Trans tb = Trans::no);

// op(A) op(B).
Matrix multiply(MatrixView A, MatrixView B, PrecisionSpec prec = PrecisionSpec::fine(),
                Trans ta = Trans::no, Trans tb = Trans::no);

// C - A B, the fused update used by the block sweeps.
Matrix subtract_product(MatrixView C, MatrixView A, MatrixView B,
                        PrecisionSpec prec = PrecisionSpec::fine());

struct QrFactors {
  Matrix Q;  // n x m with orthonormal columns
  Matrix R;  // m x m upper triangular, nonnegative diagonal
};

// Thin Householder QR of an n x m matrix, n >= m.
QrFactors householder_qr(MatrixView A, PrecisionSpec prec = PrecisionSpec::fine());

// Upper triangular R with R^T R = G. Throws NotPositiveDefinite.
Matrix cholesky(MatrixView G, PrecisionSpec prec = PrecisionSpec::fine());

// Solves R X = B (left) or X R = B (right) for upper triangular R.
// Throws SingularMatrix on a zero diagonal entry.
Matrix triangular_solve(MatrixView R, MatrixView B, Side side,
                        PrecisionSpec prec = PrecisionSpec::fine());

// Least squares solution of min ||A X - B||_F via Householder QR of A.
// Throws SingularMatrix when A is numerically rank deficient.
Matrix least_squares(MatrixView A, MatrixView B);

struct EigenDecomposition {
  // Sorted by descending modulus; a conjugate pair is adjacent with the
  // positive imaginary part first.
  std::vector<std::complex<double>> values;
  // Real eigenvalue: unit column. Conjugate pair (j, j+1): columns j and j+1
  // hold the real and imaginary parts of the eigenvector of values[j],
  // scaled so the complex vector has unit norm.
  Matrix vectors;
};

// Eigen-decomposition of an upper Hessenberg matrix by Francis double-shift
// QR. Throws ConvergenceError after 30 * dim sweeps without deflation.
EigenDecomposition hessenberg_eig(MatrixView H);

// General real square matrix: orthogonal reduction to Hessenberg form
// followed by hessenberg_eig.
EigenDecomposition eig(MatrixView A);

// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(MatrixView A);

// sigma_max / sigma_min; +inf for a numerically singular matrix.
double cond_estimate(MatrixView A);

double frobenius_norm(MatrixView A);
double max_abs(MatrixView A);
Matrix subtract(MatrixView A, MatrixView B);
Matrix add(MatrixView A, MatrixView B);
Matrix scaled(MatrixView A, double alpha);
Matrix hstack(const std::vector<MatrixView>& parts);

// ||I - Q^T Q||_F evaluated in binary64.
double orthogonality_loss(MatrixView Q);

// cond(Q(:, 1:c)) for each block prefix end c of the partition. Uses one QR
// of Q since the leading triangles of its R factor are the R factors of the
// prefixes.
std::vector<double> prefix_condition_numbers(MatrixView Q, const BlockPartition& partition);

// ||W_(1:i) - Q_(1:i) R_(1:i,1:i)||_F / ||W_(1:i)||_F for each block prefix.
std::vector<double> prefix_factorization_errors(MatrixView W, MatrixView Q, MatrixView R,
                                                const BlockPartition& partition);

}  // namespace sketchkrylov
