#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

// One-sided Jacobi on the columns of a (rows x cols, column-major).
std::vector<double> jacobi_singular_values(std::vector<double> a, std::size_t rows, std::size_t cols) {
  const double tol = static_cast<double>(rows) * 0x1p-53;
  constexpr int kMaxSweeps = 80;
  std::vector<double> sq(cols);
  auto col = [&](std::size_t j) { return a.data() + j * rows; };
  auto colsq = [&](std::size_t j) {
    const double* c = col(j);
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += c[i] * c[i];
    return s;
  };
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t j = 0; j < cols; ++j) sq[j] = colsq(j);
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = sq[p], beta = sq[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        double* up = col(p);
        double* uq = col(q);
        double gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) gamma += up[i] * uq[i];
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = up[i], y = uq[i];
          up[i] = c * x - s * y;
          uq[i] = s * x + c * y;
        }
        sq[p] = colsq(p);
        sq[q] = colsq(q);
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* c = col(j);
    double scale = 0.0;
    for (std::size_t i = 0; i < rows; ++i) scale = std::max(scale, std::abs(c[i]));
    double s = 0.0;
    if (scale > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) s += (c[i] / scale) * (c[i] / scale);
    }
    sv[j] = scale * std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace

std::vector<double> singular_values(MatrixView A) {
  if (A.rows == 0 || A.cols == 0) return {};
  if (A.rows < A.cols) return singular_values(Matrix(A).transpose());
  Matrix work = A.rows > A.cols ? householder_qr(A).R : Matrix(A);
  return jacobi_singular_values(work.values(), work.rows(), work.cols());
}

double cond_estimate(MatrixView A) {
  const std::vector<double> sv = singular_values(A);
  if (sv.empty()) return 1.0;
  if (sv.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / sv.back();
}

}  // namespace sketchkrylov
