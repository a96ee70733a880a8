#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "sketchkrylov/sketchkrylov.hpp"

namespace sketchkrylov::testing {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LApply = std::function<LMatrix(const LMatrix&)>;

LMatrix to_long(MatrixView A);
Eigen::MatrixXd to_eigen(MatrixView A);
Matrix from_eigen(const Eigen::MatrixXd& A);
Matrix from_long(const LMatrix& A);

// A * B accumulated in long double.
LMatrix long_product(MatrixView A, MatrixView B);

// Operator applications in long double.
LApply long_apply(const CsrMatrix& A);
LApply long_apply(const std::vector<double>& diag);
LApply long_apply(MatrixView dense);

struct OracleArnoldi {
  LMatrix Q;  // n x p*w
  LMatrix H;  // p*w x (p-1)*w
  LMatrix R_first;
};

// Block Arnoldi with two-pass block classical Gram-Schmidt and Householder
// QR of each block (positive R diagonal), all in long double.
OracleArnoldi oracle_arnoldi(const LApply& A, MatrixView B, std::size_t p);

// For j = 1..iterations: max over columns of min_{u in K_j(A, B)} ||A u - b|| / ||b||.
std::vector<double> oracle_gmres_minima(const LApply& A, MatrixView B, std::size_t iterations);

// Roots of the characteristic polynomial of a small matrix: coefficients by
// the Hessenberg determinant recurrence, roots by Durand-Kerner iteration.
std::vector<std::complex<long double>> charpoly_roots(MatrixView H);

// Uniform entries in [-1, 1).
Matrix uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Orthonormal n x m matrix (QR of a Gaussian matrix).
Matrix random_orthonormal(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace sketchkrylov::testing
