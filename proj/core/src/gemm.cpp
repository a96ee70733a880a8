#include <algorithm>
#include <cmath>
#include <string>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

std::string shape(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

template <class T>
void gemm_nn(T alpha, MatrixView a, MatrixView b, bool tb, T beta, MatrixView c, Matrix& out) {
  const std::size_t M = out.rows(), N = out.cols(), K = a.cols;
  constexpr std::size_t kRowBlock = 256;
  constexpr std::size_t kColBlock = 4;
  T acc[kColBlock][kRowBlock];
  T bl[kColBlock];
  for (std::size_t i0 = 0; i0 < M; i0 += kRowBlock) {
    const std::size_t rb = std::min(kRowBlock, M - i0);
    for (std::size_t j0 = 0; j0 < N; j0 += kColBlock) {
      const std::size_t jb = std::min(kColBlock, N - j0);
      for (std::size_t jj = 0; jj < jb; ++jj) std::fill_n(acc[jj], rb, T(0));
      for (std::size_t l = 0; l < K; ++l) {
        const double* ap = a.data + i0 + l * a.ld;
        for (std::size_t jj = 0; jj < jb; ++jj) {
          bl[jj] = static_cast<T>(tb ? b(j0 + jj, l) : b(l, j0 + jj));
        }
        if (jb == kColBlock) {
          const T b0 = bl[0], b1 = bl[1], b2 = bl[2], b3 = bl[3];
          T* a0 = acc[0];
          T* a1 = acc[1];
          T* a2 = acc[2];
          T* a3 = acc[3];
          for (std::size_t i = 0; i < rb; ++i) {
            const T av = static_cast<T>(ap[i]);
            a0[i] = a0[i] + av * b0;
            a1[i] = a1[i] + av * b1;
            a2[i] = a2[i] + av * b2;
            a3[i] = a3[i] + av * b3;
          }
        } else {
          for (std::size_t jj = 0; jj < jb; ++jj) {
            const T bv = bl[jj];
            T* aj = acc[jj];
            for (std::size_t i = 0; i < rb; ++i) aj[i] = aj[i] + static_cast<T>(ap[i]) * bv;
          }
        }
      }
      for (std::size_t jj = 0; jj < jb; ++jj) {
        double* o = out.col(j0 + jj) + i0;
        if (beta != T(0)) {
          const double* cp = c.col(j0 + jj) + i0;
          for (std::size_t i = 0; i < rb; ++i) {
            o[i] = static_cast<double>(alpha * acc[jj][i] + beta * static_cast<T>(cp[i]));
          }
        } else {
          for (std::size_t i = 0; i < rb; ++i) o[i] = static_cast<double>(alpha * acc[jj][i]);
        }
      }
    }
  }
}

// op(A) = A^T: entries are dot products of columns, evaluated four at a time
// with independent accumulators so the per-entry order is unchanged.
template <class T>
void gemm_tn(T alpha, MatrixView a, MatrixView b, bool tb, T beta, MatrixView c, Matrix& out) {
  const std::size_t M = out.rows(), N = out.cols(), K = a.rows;
  auto finish = [&](std::size_t i, std::size_t j, T acc) {
    out(i, j) = beta != T(0) ? static_cast<double>(alpha * acc + beta * static_cast<T>(c(i, j)))
                             : static_cast<double>(alpha * acc);
  };
  std::vector<T> bcol(K);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t l = 0; l < K; ++l) bcol[l] = static_cast<T>(tb ? b(j, l) : b(l, j));
    std::size_t i = 0;
    for (; i + 4 <= M; i += 4) {
      const double* p0 = a.col(i);
      const double* p1 = a.col(i + 1);
      const double* p2 = a.col(i + 2);
      const double* p3 = a.col(i + 3);
      T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
      for (std::size_t l = 0; l < K; ++l) {
        const T bv = bcol[l];
        s0 = s0 + static_cast<T>(p0[l]) * bv;
        s1 = s1 + static_cast<T>(p1[l]) * bv;
        s2 = s2 + static_cast<T>(p2[l]) * bv;
        s3 = s3 + static_cast<T>(p3[l]) * bv;
      }
      finish(i, j, s0);
      finish(i + 1, j, s1);
      finish(i + 2, j, s2);
      finish(i + 3, j, s3);
    }
    for (; i < M; ++i) {
      const double* p = a.col(i);
      T s = 0;
      for (std::size_t l = 0; l < K; ++l) s = s + static_cast<T>(p[l]) * bcol[l];
      finish(i, j, s);
    }
  }
}

}  // namespace

Matrix gemm(double alpha, MatrixView A, MatrixView B, double beta, MatrixView C, PrecisionSpec prec,
            Trans ta, Trans tb) {
  const bool tA = ta == Trans::yes, tB = tb == Trans::yes;
  const std::size_t M = tA ? A.cols : A.rows;
  const std::size_t KA = tA ? A.rows : A.cols;
  const std::size_t KB = tB ? B.cols : B.rows;
  const std::size_t N = tB ? B.rows : B.cols;
  if (KA != KB) {
    throw DimensionError("gemm: op(A) is " + shape(M, KA) + " but op(B) is " + shape(KB, N));
  }
  if (beta != 0.0 && (C.rows != M || C.cols != N)) {
    throw DimensionError("gemm: C is " + shape(C.rows, C.cols) + " but op(A) op(B) is " +
                         shape(M, N));
  }
  Matrix out(M, N, prec);
  if (M == 0 || N == 0) return out;
  if (prec.is_coarse()) {
    const float fa = static_cast<float>(alpha), fb = static_cast<float>(beta);
    if (tA) gemm_tn<float>(fa, A, B, tB, fb, C, out);
    else gemm_nn<float>(fa, A, B, tB, fb, C, out);
  } else {
    if (tA) gemm_tn<double>(alpha, A, B, tB, beta, C, out);
    else gemm_nn<double>(alpha, A, B, tB, beta, C, out);
  }
  return out;
}

Matrix multiply(MatrixView A, MatrixView B, PrecisionSpec prec, Trans ta, Trans tb) {
  return gemm(1.0, A, B, 0.0, MatrixView{}, prec, ta, tb);
}

Matrix subtract_product(MatrixView C, MatrixView A, MatrixView B, PrecisionSpec prec) {
  return gemm(-1.0, A, B, 1.0, C, prec);
}

double frobenius_norm(MatrixView A) {
  // Scaled sum of squares, safe against overflow for large entries.
  double scale = 0.0, ssq = 1.0;
  for (std::size_t j = 0; j < A.cols; ++j) {
    const double* p = A.col(j);
    for (std::size_t i = 0; i < A.rows; ++i) {
      const double v = std::abs(p[i]);
      if (v == 0.0) continue;
      if (scale < v) {
        ssq = 1.0 + ssq * (scale / v) * (scale / v);
        scale = v;
      } else {
        ssq += (v / scale) * (v / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

double max_abs(MatrixView A) {
  double m = 0.0;
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) m = std::max(m, std::abs(A(i, j)));
  return m;
}

namespace {
template <class Op>
Matrix elementwise(MatrixView A, MatrixView B, Op op, const char* name) {
  if (A.rows != B.rows || A.cols != B.cols) {
    throw DimensionError(std::string(name) + ": " + shape(A.rows, A.cols) + " vs " +
                         shape(B.rows, B.cols));
  }
  Matrix out(A.rows, A.cols);
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) out(i, j) = op(A(i, j), B(i, j));
  return out;
}
}  // namespace

Matrix subtract(MatrixView A, MatrixView B) {
  return elementwise(A, B, [](double x, double y) { return x - y; }, "subtract");
}

Matrix add(MatrixView A, MatrixView B) {
  return elementwise(A, B, [](double x, double y) { return x + y; }, "add");
}

Matrix scaled(MatrixView A, double alpha) {
  Matrix out(A.rows, A.cols);
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) out(i, j) = alpha * A(i, j);
  return out;
}

Matrix hstack(const std::vector<MatrixView>& parts) {
  if (parts.empty()) return {};
  const std::size_t n = parts.front().rows;
  std::size_t m = 0;
  for (const auto& p : parts) {
    if (p.rows != n) throw DimensionError("hstack: row counts differ");
    m += p.cols;
  }
  Matrix out(n, m);
  std::size_t c = 0;
  for (const auto& p : parts) {
    out.set_block(0, c, p);
    c += p.cols;
  }
  return out;
}

double orthogonality_loss(MatrixView Q) {
  Matrix G = multiply(Q, Q, PrecisionSpec::fine(), Trans::yes);
  for (std::size_t i = 0; i < G.rows(); ++i) G(i, i) -= 1.0;
  return frobenius_norm(G);
}

}  // namespace sketchkrylov
