#include "sketchkrylov/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/philox.hpp"

namespace sketchkrylov {
namespace {

void check_grid(const std::vector<std::size_t>& grid) {
  if (grid.empty() || grid.size() > 2) throw InvalidArgument("Laplacian grid must have one or two dimensions");
  for (std::size_t d : grid) {
    if (d < 2) throw InvalidArgument("Laplacian grid dimensions must be at least 2");
  }
}

}  // namespace

Matrix gen_synthetic_51(std::size_t n, std::size_t m) {
  if (n < 2 || m < 2) throw InvalidArgument("synthetic matrix needs n, m >= 2");
  Matrix W(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    const double mu = static_cast<double>(j + 1) / static_cast<double>(m);
    double* w = W.col(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i + 1) / static_cast<double>(n);
      w[i] = std::sin(10.0 * (mu + x)) / (std::cos(100.0 * (mu - x)) + 1.1);
    }
  }
  return W;
}

CsrMatrix gen_laplacian_csr(const std::vector<std::size_t>& grid, double shift) {
  check_grid(grid);
  const std::size_t nx = grid[0], ny = grid.size() == 2 ? grid[1] : 1;
  const double diag = 2.0 * static_cast<double>(grid.size()) + shift;
  const std::size_t n = nx * ny;
  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values;
  row_ptr.reserve(n + 1);
  col_idx.reserve(5 * n);
  values.reserve(5 * n);
  auto push = [&](std::size_t c, double v) {
    col_idx.push_back(c);
    values.push_back(v);
  };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t r = i + nx * j;
      if (j > 0) push(r - nx, -1.0);
      if (i > 0) push(r - 1, -1.0);
      push(r, diag);
      if (i + 1 < nx) push(r + 1, -1.0);
      if (j + 1 < ny) push(r + nx, -1.0);
      row_ptr.push_back(col_idx.size());
    }
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

LinearOperator gen_laplacian(const std::vector<std::size_t>& grid, double shift) {
  return LinearOperator::sparse(gen_laplacian_csr(grid, shift));
}

std::vector<double> laplacian_eigenvalues(const std::vector<std::size_t>& grid, double shift) {
  check_grid(grid);
  auto line = [](std::size_t N) {
    std::vector<double> ev(N);
    for (std::size_t k = 0; k < N; ++k) {
      const double s = std::sin(std::numbers::pi * static_cast<double>(k + 1) / (2.0 * static_cast<double>(N + 1)));
      ev[k] = 4.0 * s * s;
    }
    return ev;
  };
  const std::vector<double> ex = line(grid[0]);
  std::vector<double> out;
  if (grid.size() == 1) {
    for (double a : ex) out.push_back(a + shift);
  } else {
    const std::vector<double> ey = line(grid[1]);
    out.reserve(ex.size() * ey.size());
    for (double b : ey) {
      for (double a : ex) out.push_back(a + b + shift);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint32_t stream) {
  PhiloxStream rng(seed, stream);
  Matrix G(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) G(i, j) = rng.normal();
  }
  return G;
}

Matrix random_with_condition(std::size_t rows, std::size_t cols, double cond, std::uint64_t seed) {
  if (rows < cols || cols == 0) throw InvalidArgument("random_with_condition needs rows >= cols > 0");
  if (!(cond >= 1.0)) throw InvalidArgument("condition number must be at least 1");
  const Matrix U = householder_qr(gaussian_matrix(rows, cols, seed, 0)).Q;
  const Matrix V = householder_qr(gaussian_matrix(cols, cols, seed, 1)).Q;
  Matrix SV = V.transpose();
  for (std::size_t i = 0; i < cols; ++i) {
    const double t = cols > 1 ? static_cast<double>(i) / static_cast<double>(cols - 1) : 0.0;
    const double sigma = std::pow(cond, -t);
    for (std::size_t j = 0; j < cols; ++j) SV(i, j) *= sigma;
  }
  return multiply(U, SV);
}

}  // namespace sketchkrylov
