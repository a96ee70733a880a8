#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

using Grid = std::vector<std::vector<double>>;

Grid to_grid(MatrixView A) {
  Grid g(A.rows, std::vector<double>(A.cols));
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) g[i][j] = A(i, j);
  return g;
}

Grid identity_grid(std::size_t n) {
  Grid g(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = 1.0;
  return g;
}

// Householder reduction to upper Hessenberg form, accumulating V.
void reduce_to_hessenberg(Grid& H, Grid& V) {
  const int n = static_cast<int>(H.size());
  const int low = 0, high = n - 1;
  std::vector<double> ort(n, 0.0);
  for (int m = low + 1; m <= high - 1; ++m) {
    double scale = 0.0;
    for (int i = m; i <= high; ++i) scale += std::abs(H[i][m - 1]);
    if (scale == 0.0) continue;
    double h = 0.0;
    for (int i = high; i >= m; --i) {
      ort[i] = H[i][m - 1] / scale;
      h += ort[i] * ort[i];
    }
    double g = std::sqrt(h);
    if (ort[m] > 0) g = -g;
    h -= ort[m] * g;
    ort[m] -= g;
    for (int j = m; j < n; ++j) {
      double f = 0.0;
      for (int i = high; i >= m; --i) f += ort[i] * H[i][j];
      f /= h;
      for (int i = m; i <= high; ++i) H[i][j] -= f * ort[i];
    }
    for (int i = 0; i <= high; ++i) {
      double f = 0.0;
      for (int j = high; j >= m; --j) f += ort[j] * H[i][j];
      f /= h;
      for (int j = m; j <= high; ++j) H[i][j] -= f * ort[j];
    }
    ort[m] = scale * ort[m];
    H[m][m - 1] = scale * g;
  }
  V = identity_grid(n);
  for (int m = high - 1; m >= low + 1; --m) {
    if (H[m][m - 1] == 0.0) continue;
    for (int i = m + 1; i <= high; ++i) ort[i] = H[i][m - 1];
    for (int j = m; j <= high; ++j) {
      double g = 0.0;
      for (int i = m; i <= high; ++i) g += ort[i] * V[i][j];
      g = (g / ort[m]) / H[m][m - 1];
      for (int i = m; i <= high; ++i) V[i][j] += g * ort[i];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) H[i][j] = 0.0;
}

std::complex<double> cdiv(double xr, double xi, double yr, double yi) {
  double r, d;
  if (std::abs(yr) > std::abs(yi)) {
    r = yi / yr;
    d = yr + r * yi;
    return {(xr + r * xi) / d, (xi - r * xr) / d};
  }
  r = yr / yi;
  d = yi + r * yr;
  return {(r * xr + xi) / d, (r * xi - xr) / d};
}

// Francis double-shift QR on Hessenberg H with accumulated transformations in
// V, then back-substitution for the eigenvectors of the quasi-triangular
// form. On return V holds eigenvectors in real form (d, e are the real and
// imaginary parts of the eigenvalues).
void schur_and_vectors(Grid& H, Grid& V, std::vector<double>& d, std::vector<double>& e) {
  const int nn = static_cast<int>(H.size());
  int n = nn - 1;
  const int low = 0, high = nn - 1;
  const double eps = std::ldexp(1.0, -52);
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;
  d.assign(nn, 0.0);
  e.assign(nn, 0.0);

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H[i][j]);

  const long max_sweeps = 30L * nn;
  long total_sweeps = 0;
  int iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H[l - 1][l - 1]) + std::abs(H[l][l]);
      if (s == 0.0) s = norm;
      if (std::abs(H[l][l - 1]) < eps * s) break;
      --l;
    }
    if (l == n) {
      H[n][n] = H[n][n] + exshift;
      d[n] = H[n][n];
      e[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H[n][n - 1] * H[n - 1][n];
      p = (H[n - 1][n - 1] - H[n][n]) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      H[n][n] = H[n][n] + exshift;
      H[n - 1][n - 1] = H[n - 1][n - 1] + exshift;
      x = H[n][n];
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        d[n - 1] = x + z;
        d[n] = d[n - 1];
        if (z != 0.0) d[n] = x - w / z;
        e[n - 1] = 0.0;
        e[n] = 0.0;
        x = H[n][n - 1];
        s = std::abs(x) + std::abs(z);
        p = x / s;
        q = z / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          z = H[n - 1][j];
          H[n - 1][j] = q * z + p * H[n][j];
          H[n][j] = q * H[n][j] - p * z;
        }
        for (int i = 0; i <= n; ++i) {
          z = H[i][n - 1];
          H[i][n - 1] = q * z + p * H[i][n];
          H[i][n] = q * H[i][n] - p * z;
        }
        for (int i = low; i <= high; ++i) {
          z = V[i][n - 1];
          V[i][n - 1] = q * z + p * V[i][n];
          V[i][n] = q * V[i][n] - p * z;
        }
      } else {
        d[n - 1] = x + p;
        d[n] = x + p;
        e[n - 1] = z;
        e[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total_sweeps > max_sweeps) {
        throw ConvergenceError("QR iteration did not converge for eigenvalue " + std::to_string(n),
                               static_cast<std::size_t>(n));
      }
      x = H[n][n];
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H[n - 1][n - 1];
        w = H[n][n - 1] * H[n - 1][n];
      }
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) H[i][i] -= x;
        s = std::abs(H[n][n - 1]) + std::abs(H[n - 1][n - 2]);
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) H[i][i] -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        z = H[m][m];
        r = x - z;
        s = y - z;
        p = (r * s - w) / H[m + 1][m] + H[m][m + 1];
        q = H[m + 1][m + 1] - z - r - s;
        r = H[m + 2][m + 1];
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H[m][m - 1]) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H[m - 1][m - 1]) + std::abs(z) + std::abs(H[m + 1][m + 1])))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H[i][i - 2] = 0.0;
        if (i > m + 2) H[i][i - 3] = 0.0;
      }
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H[k][k - 1];
          q = H[k + 1][k - 1];
          r = notlast ? H[k + 2][k - 1] : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m) {
            H[k][k - 1] = -s * x;
          } else if (l != m) {
            H[k][k - 1] = -H[k][k - 1];
          }
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;
          for (int j = k; j < nn; ++j) {
            p = H[k][j] + q * H[k + 1][j];
            if (notlast) {
              p += r * H[k + 2][j];
              H[k + 2][j] -= p * z;
            }
            H[k][j] -= p * x;
            H[k + 1][j] -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * H[i][k] + y * H[i][k + 1];
            if (notlast) {
              p += z * H[i][k + 2];
              H[i][k + 2] -= p * r;
            }
            H[i][k] -= p;
            H[i][k + 1] -= p * q;
          }
          for (int i = low; i <= high; ++i) {
            p = x * V[i][k] + y * V[i][k + 1];
            if (notlast) {
              p += z * V[i][k + 2];
              V[i][k + 2] -= p * r;
            }
            V[i][k] -= p;
            V[i][k + 1] -= p * q;
          }
        }
      }
    }
  }

  if (norm == 0.0) return;

  for (n = nn - 1; n >= 0; --n) {
    p = d[n];
    q = e[n];
    if (q == 0) {
      int l = n;
      H[n][n] = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        w = H[i][i] - p;
        r = 0.0;
        for (int j = l; j <= n; ++j) r += H[i][j] * H[j][n];
        if (e[i] < 0.0) {
          z = w;
          s = r;
        } else {
          l = i;
          if (e[i] == 0.0) {
            H[i][n] = w != 0.0 ? -r / w : -r / (eps * norm);
          } else {
            x = H[i][i + 1];
            y = H[i + 1][i];
            q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
            t = (x * s - z * r) / q;
            H[i][n] = t;
            H[i + 1][n] = std::abs(x) > std::abs(z) ? (-r - w * t) / x : (-s - y * t) / z;
          }
          t = std::abs(H[i][n]);
          if ((eps * t) * t > 1) {
            for (int j = i; j <= n; ++j) H[j][n] /= t;
          }
        }
      }
    } else if (q < 0) {
      int l = n - 1;
      if (std::abs(H[n][n - 1]) > std::abs(H[n - 1][n])) {
        H[n - 1][n - 1] = q / H[n][n - 1];
        H[n - 1][n] = -(H[n][n] - p) / H[n][n - 1];
      } else {
        const auto c = cdiv(0.0, -H[n - 1][n], H[n - 1][n - 1] - p, q);
        H[n - 1][n - 1] = c.real();
        H[n - 1][n] = c.imag();
      }
      H[n][n - 1] = 0.0;
      H[n][n] = 1.0;
      for (int i = n - 2; i >= 0; --i) {
        double ra = 0.0, sa = 0.0, vr, vi;
        for (int j = l; j <= n; ++j) {
          ra += H[i][j] * H[j][n - 1];
          sa += H[i][j] * H[j][n];
        }
        w = H[i][i] - p;
        if (e[i] < 0.0) {
          z = w;
          r = ra;
          s = sa;
        } else {
          l = i;
          if (e[i] == 0) {
            const auto c = cdiv(-ra, -sa, w, q);
            H[i][n - 1] = c.real();
            H[i][n] = c.imag();
          } else {
            x = H[i][i + 1];
            y = H[i + 1][i];
            vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
            vi = (d[i] - p) * 2.0 * q;
            if (vr == 0.0 && vi == 0.0) {
              vr = eps * norm * (std::abs(w) + std::abs(q) + std::abs(x) + std::abs(y) + std::abs(z));
            }
            const auto c = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
            H[i][n - 1] = c.real();
            H[i][n] = c.imag();
            if (std::abs(x) > (std::abs(z) + std::abs(q))) {
              H[i + 1][n - 1] = (-ra - w * H[i][n - 1] + q * H[i][n]) / x;
              H[i + 1][n] = (-sa - w * H[i][n] - q * H[i][n - 1]) / x;
            } else {
              const auto c2 = cdiv(-r - y * H[i][n - 1], -s - y * H[i][n], z, q);
              H[i + 1][n - 1] = c2.real();
              H[i + 1][n] = c2.imag();
            }
          }
          t = std::max(std::abs(H[i][n - 1]), std::abs(H[i][n]));
          if ((eps * t) * t > 1) {
            for (int j = i; j <= n; ++j) {
              H[j][n - 1] /= t;
              H[j][n] /= t;
            }
          }
        }
      }
    }
  }

  for (int j = nn - 1; j >= low; --j) {
    for (int i = low; i <= high; ++i) {
      z = 0.0;
      for (int k = low; k <= std::min(j, high); ++k) z += V[i][k] * H[k][j];
      V[i][j] = z;
    }
  }
}

EigenDecomposition finish(const Grid& V, const std::vector<double>& d, const std::vector<double>& e) {
  const std::size_t n = d.size();
  // Group indices into units: single real eigenvalue or a conjugate pair
  // (j, j+1) with e[j] > 0.
  struct Unit {
    std::size_t first;
    bool pair;
    std::complex<double> value;
  };
  std::vector<Unit> units;
  for (std::size_t j = 0; j < n; ++j) {
    if (e[j] > 0.0 && j + 1 < n) {
      units.push_back({j, true, {d[j], e[j]}});
      ++j;
    } else {
      units.push_back({j, false, {d[j], 0.0}});
    }
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });
  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors = Matrix(n, n);
  std::size_t c = 0;
  for (const Unit& u : units) {
    if (u.pair) {
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nrm += V[i][u.first] * V[i][u.first] + V[i][u.first + 1] * V[i][u.first + 1];
      }
      nrm = std::sqrt(nrm);
      for (std::size_t i = 0; i < n; ++i) {
        out.vectors(i, c) = V[i][u.first] / nrm;
        out.vectors(i, c + 1) = V[i][u.first + 1] / nrm;
      }
      out.values.push_back(u.value);
      out.values.push_back(std::conj(u.value));
      c += 2;
    } else {
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm += V[i][u.first] * V[i][u.first];
      nrm = std::sqrt(nrm);
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = nrm > 0.0 ? V[i][u.first] / nrm : 0.0;
      out.values.push_back(u.value);
      c += 1;
    }
  }
  return out;
}

void require_square(MatrixView A, const char* who) {
  if (A.rows != A.cols) {
    throw DimensionError(std::string(who) + " needs a square matrix, got " + std::to_string(A.rows) +
                         "x" + std::to_string(A.cols));
  }
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i)
      if (!std::isfinite(A(i, j))) throw InvalidArgument(std::string(who) + ": non-finite entry");
}

}  // namespace

EigenDecomposition hessenberg_eig(MatrixView Hin) {
  require_square(Hin, "hessenberg_eig");
  for (std::size_t j = 0; j < Hin.cols; ++j)
    for (std::size_t i = j + 2; i < Hin.rows; ++i)
      if (Hin(i, j) != 0.0) throw InvalidArgument("hessenberg_eig: matrix is not upper Hessenberg");
  if (Hin.rows == 0) return {};
  Grid H = to_grid(Hin);
  Grid V = identity_grid(Hin.rows);
  std::vector<double> d, e;
  schur_and_vectors(H, V, d, e);
  return finish(V, d, e);
}

EigenDecomposition eig(MatrixView A) {
  require_square(A, "eig");
  if (A.rows == 0) return {};
  Grid H = to_grid(A);
  Grid V;
  reduce_to_hessenberg(H, V);
  std::vector<double> d, e;
  schur_and_vectors(H, V, d, e);
  return finish(V, d, e);
}

}  // namespace sketchkrylov
