#pragma once

#include <cstdint>
#include <vector>

#include "sketchkrylov/linear_operator.hpp"
#include "sketchkrylov/matrix.hpp"
#include "sketchkrylov/sparse.hpp"

namespace sketchkrylov {

// W(i, j) = f(mu_j, x_i), f(mu, x) = sin(10 (mu + x)) / (cos(100 (mu - x)) + 1.1)
// with x_i = (i + 1) / n and mu_j = (j + 1) / m.
Matrix gen_synthetic_51(std::size_t n, std::size_t m);

// Finite-difference Laplacian (2 per dimension on the diagonal, -1 for each
// neighbour, Dirichlet boundary) on a 1D or 2D grid, plus shift * I. Grid
// point (i, j) has index i + nx * j.
CsrMatrix gen_laplacian_csr(const std::vector<std::size_t>& grid, double shift = 0.0);
LinearOperator gen_laplacian(const std::vector<std::size_t>& grid, double shift = 0.0);

// Eigenvalues of gen_laplacian_csr(grid, shift), descending.
std::vector<double> laplacian_eigenvalues(const std::vector<std::size_t>& grid, double shift = 0.0);

// i.i.d. standard normal entries from Philox stream `stream`.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint32_t stream = 0);

// U diag(sigma) V^T with random orthonormal U, V and singular values
// log-spaced from 1 down to 1 / cond.
Matrix random_with_condition(std::size_t rows, std::size_t cols, double cond, std::uint64_t seed);

}  // namespace sketchkrylov
