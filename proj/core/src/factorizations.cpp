#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

template <class T>
T dot(const T* x, const T* y, std::size_t n) {
  T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

template <class T>
T norm2(const T* x, std::size_t n) {
  T scale = 0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(x[i]));
  if (scale == T(0)) return T(0);
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T v = x[i] / scale;
    s += v * v;
  }
  return scale * std::sqrt(s);
}

template <class T>
std::vector<T> to_work(MatrixView A) {
  std::vector<T> w(A.rows * A.cols);
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) w[i + j * A.rows] = static_cast<T>(A(i, j));
  return w;
}

template <class T>
QrFactors householder_impl(MatrixView A, PrecisionSpec prec) {
  const std::size_t n = A.rows, m = A.cols;
  std::vector<T> a = to_work<T>(A);
  std::vector<T> tau(m, T(0)), diag(m, T(0));
  for (std::size_t j = 0; j < m; ++j) {
    T* x = a.data() + j + j * n;
    const std::size_t len = n - j;
    const T alpha = norm2(x, len);
    if (alpha == T(0)) continue;
    const T beta = x[0] >= T(0) ? -alpha : alpha;
    const T v0 = x[0] - beta;
    tau[j] = (beta - x[0]) / beta;
    for (std::size_t i = 1; i < len; ++i) x[i] /= v0;
    x[0] = T(1);
    diag[j] = beta;
    for (std::size_t k = j + 1; k < m; ++k) {
      T* y = a.data() + j + k * n;
      const T w = tau[j] * dot(x, y, len);
      for (std::size_t i = 0; i < len; ++i) y[i] -= w * x[i];
    }
  }
  QrFactors f{Matrix(n, m, prec), Matrix(m, m, prec)};
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < k; ++i) f.R(i, k) = static_cast<double>(a[i + k * n]);
    f.R(k, k) = static_cast<double>(diag[k]);
  }
  std::vector<T> q(n * m, T(0));
  for (std::size_t j = 0; j < m; ++j) q[j + j * n] = T(1);
  for (std::size_t jj = m; jj-- > 0;) {
    if (tau[jj] == T(0)) continue;
    const T* v = a.data() + jj + jj * n;
    const std::size_t len = n - jj;
    for (std::size_t k = jj; k < m; ++k) {
      T* y = q.data() + jj + k * n;
      const T w = tau[jj] * dot(v, y, len);
      for (std::size_t i = 0; i < len; ++i) y[i] -= w * v[i];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    const bool flip = f.R(k, k) < 0.0;
    double* qc = f.Q.col(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = static_cast<double>(q[i + k * n]);
      qc[i] = flip ? -v : v;
    }
    if (flip) {
      for (std::size_t c = k; c < m; ++c) f.R(k, c) = -f.R(k, c);
    }
  }
  return f;
}

template <class T>
Matrix cholesky_impl(MatrixView G, PrecisionSpec prec) {
  const std::size_t n = G.rows;
  std::vector<T> r(n * n, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    T* rj = r.data() + j * n;
    for (std::size_t i = 0; i < j; ++i) {
      const T* ri = r.data() + i * n;
      T s = static_cast<T>(G(i, j));
      for (std::size_t k = 0; k < i; ++k) s -= ri[k] * rj[k];
      rj[i] = s / ri[i];
    }
    T d = static_cast<T>(G(j, j));
    for (std::size_t k = 0; k < j; ++k) d -= rj[k] * rj[k];
    if (!(d > T(0))) throw NotPositiveDefinite(j);
    rj[j] = std::sqrt(d);
  }
  Matrix R(n, n, prec);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) R(i, j) = static_cast<double>(r[i + j * n]);
  return R;
}

template <class T>
Matrix trsm_impl(MatrixView R, MatrixView B, Side side, PrecisionSpec prec) {
  const std::size_t k = R.rows;
  for (std::size_t i = 0; i < k; ++i) {
    if (R(i, i) == 0.0 || static_cast<T>(R(i, i)) == T(0)) {
      throw SingularMatrix("triangular factor has a zero diagonal entry at " + std::to_string(i), i);
    }
  }
  const std::size_t br = B.rows, bc = B.cols;
  std::vector<T> x = to_work<T>(B);
  std::vector<T> r = to_work<T>(R);
  if (side == Side::left) {
    for (std::size_t c = 0; c < bc; ++c) {
      T* xc = x.data() + c * br;
      for (std::size_t i = k; i-- > 0;) {
        const T* ri = r.data() + i * k;
        xc[i] /= ri[i];
        const T xi = xc[i];
        for (std::size_t l = 0; l < i; ++l) xc[l] -= ri[l] * xi;
      }
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      T* xj = x.data() + j * br;
      const T* rj = r.data() + j * k;
      for (std::size_t l = 0; l < j; ++l) {
        const T coef = rj[l];
        if (coef == T(0)) continue;
        const T* xl = x.data() + l * br;
        for (std::size_t i = 0; i < br; ++i) xj[i] -= xl[i] * coef;
      }
      const T d = rj[j];
      for (std::size_t i = 0; i < br; ++i) xj[i] /= d;
    }
  }
  Matrix X(br, bc, prec);
  for (std::size_t i = 0; i < br * bc; ++i) X.data()[i] = static_cast<double>(x[i]);
  return X;
}

std::string shape(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

QrFactors householder_qr(MatrixView A, PrecisionSpec prec) {
  if (A.rows < A.cols) {
    throw DimensionError("householder_qr needs rows >= cols, got " + shape(A.rows, A.cols));
  }
  return prec.is_coarse() ? householder_impl<float>(A, prec) : householder_impl<double>(A, prec);
}

Matrix cholesky(MatrixView G, PrecisionSpec prec) {
  if (G.rows != G.cols) throw DimensionError("cholesky needs a square matrix, got " + shape(G.rows, G.cols));
  return prec.is_coarse() ? cholesky_impl<float>(G, prec) : cholesky_impl<double>(G, prec);
}

Matrix triangular_solve(MatrixView R, MatrixView B, Side side, PrecisionSpec prec) {
  if (R.rows != R.cols) throw DimensionError("triangular factor is " + shape(R.rows, R.cols));
  if ((side == Side::left && B.rows != R.rows) || (side == Side::right && B.cols != R.rows)) {
    throw DimensionError("triangular_solve: R is " + shape(R.rows, R.cols) + " but B is " +
                         shape(B.rows, B.cols));
  }
  return prec.is_coarse() ? trsm_impl<float>(R, B, side, prec) : trsm_impl<double>(R, B, side, prec);
}

Matrix least_squares(MatrixView A, MatrixView B) {
  if (A.rows != B.rows) {
    throw DimensionError("least_squares: A is " + shape(A.rows, A.cols) + " but B is " +
                         shape(B.rows, B.cols));
  }
  if (A.cols == 0) return Matrix(0, B.cols);
  QrFactors f = householder_qr(A);
  double dmax = 0.0;
  for (std::size_t i = 0; i < A.cols; ++i) dmax = std::max(dmax, f.R(i, i));
  const double tol = static_cast<double>(std::max(A.rows, A.cols)) * 0x1p-53 * dmax;
  for (std::size_t i = 0; i < A.cols; ++i) {
    if (!(f.R(i, i) > tol)) {
      throw SingularMatrix("least squares matrix is numerically rank deficient at column " +
                               std::to_string(i),
                           i);
    }
  }
  Matrix QtB = multiply(f.Q, B, PrecisionSpec::fine(), Trans::yes);
  return triangular_solve(f.R, QtB, Side::left);
}

std::vector<double> prefix_condition_numbers(MatrixView Q, const BlockPartition& partition) {
  if (partition.total_cols() != Q.cols) throw DimensionError("partition does not match Q");
  const Matrix T = householder_qr(Q).R;
  std::vector<double> out;
  out.reserve(partition.num_blocks());
  for (std::size_t b = 0; b < partition.num_blocks(); ++b) {
    const std::size_t c = partition.offset(b) + partition.width(b);
    out.push_back(cond_estimate(T.view(0, 0, c, c)));
  }
  return out;
}

std::vector<double> prefix_factorization_errors(MatrixView W, MatrixView Q, MatrixView R,
                                                const BlockPartition& partition) {
  if (W.rows != Q.rows || W.cols != Q.cols || R.rows != Q.cols || R.cols != Q.cols ||
      partition.total_cols() != W.cols) {
    throw DimensionError("prefix_factorization_errors: inconsistent shapes");
  }
  const Matrix E = subtract_product(W, Q, R);
  std::vector<double> out;
  double err2 = 0.0, w2 = 0.0;
  for (std::size_t b = 0; b < partition.num_blocks(); ++b) {
    const std::size_t c0 = partition.offset(b), w = partition.width(b);
    const double e = frobenius_norm(E.columns(c0, w));
    const double n = frobenius_norm(W.columns(c0, w));
    err2 += e * e;
    w2 += n * n;
    out.push_back(w2 > 0.0 ? std::sqrt(err2 / w2) : std::sqrt(err2));
  }
  return out;
}

}  // namespace sketchkrylov
