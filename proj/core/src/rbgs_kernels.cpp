#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sketchkrylov/error.hpp"
#include "sketchkrylov/rbgs.hpp"

namespace sketchkrylov {
namespace {

// R factor of an l2-QR of a k-row matrix with a negligible diagonal entry.
void require_full_rank(const Matrix& R, std::size_t rows, const char* what) {
  double rmax = 0.0;
  for (std::size_t j = 0; j < R.cols(); ++j) rmax = std::max(rmax, std::abs(R(j, j)));
  const double floor = static_cast<double>(rows) * PrecisionSpec::fine().unit_roundoff() * rmax;
  for (std::size_t j = 0; j < R.cols(); ++j) {
    if (!(std::abs(R(j, j)) > floor)) throw SingularMatrix(std::string(what) + " is rank deficient at column " + std::to_string(j + 1), j);
  }
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) throw InvalidArgument("bad " + what + " count '" + text + "'");
  return v;
}

std::pair<std::string, std::string> split_colon(const std::string& text) {
  const auto c = text.find(':');
  if (c == std::string::npos) return {text, {}};
  return {text.substr(0, c), text.substr(c + 1)};
}

}  // namespace

void LsSolver::validate() const {
  if (kind != Kind::householder_direct && iterations == 0) {
    throw InvalidArgument("iterative least-squares solvers need at least one iteration");
  }
}

std::string to_string(const LsSolver& s) {
  switch (s.kind) {
    case LsSolver::Kind::richardson: return "richardson:" + std::to_string(s.iterations);
    case LsSolver::Kind::bmgs_reorth: return "bmgs:" + std::to_string(s.iterations);
    case LsSolver::Kind::cg_normal: return "cg:" + std::to_string(s.iterations);
    case LsSolver::Kind::householder_direct: return "householder";
  }
  return "unknown";
}

LsSolver parse_ls_solver(const std::string& text) {
  const auto [name, arg] = split_colon(text);
  if (name == "householder") {
    if (!arg.empty()) throw InvalidArgument("householder solver takes no iteration count");
    return LsSolver::householder_direct();
  }
  const std::size_t l = arg.empty() ? 0 : parse_count(arg, "iteration");
  LsSolver s;
  if (name == "richardson") s = LsSolver::richardson(arg.empty() ? 5 : l);
  else if (name == "bmgs") s = LsSolver::bmgs_reorth(arg.empty() ? 2 : l);
  else if (name == "cg") s = LsSolver::cg_normal(arg.empty() ? 20 : l);
  else throw InvalidArgument("unknown least-squares solver '" + text + "'");
  s.validate();
  return s;
}

std::string to_string(const InterblockMethod& m) {
  switch (m.kind) {
    case InterblockMethod::Kind::rgs_single: return "rgs";
    case InterblockMethod::Kind::sketched_cholqr: return "cholqr:" + std::to_string(m.repetitions);
    case InterblockMethod::Kind::l2_cholqr: return "l2_cholqr";
  }
  return "unknown";
}

InterblockMethod parse_interblock(const std::string& text) {
  const auto [name, arg] = split_colon(text);
  if (name == "rgs" && arg.empty()) return InterblockMethod::rgs_single();
  if (name == "l2_cholqr" && arg.empty()) return InterblockMethod::l2_cholqr();
  if (name == "cholqr") {
    const std::size_t l = arg.empty() ? 1 : parse_count(arg, "repetition");
    if (l == 0) throw InvalidArgument("sketched Cholesky QR needs at least one repetition");
    return InterblockMethod::sketched_cholqr(l);
  }
  throw InvalidArgument("unknown inter-block method '" + text + "'");
}

Matrix ls_richardson(MatrixView S, MatrixView P, std::size_t iterations, PrecisionSpec prec) {
  if (S.rows != P.rows) throw DimensionError("least squares: S and P row counts differ");
  Matrix X(S.cols, P.cols, prec);
  for (std::size_t it = 0; it < iterations; ++it) {
    const Matrix res = gemm(-1.0, S, X, 1.0, P, prec);
    X = gemm(1.0, S, res, 1.0, X, prec, Trans::yes);
  }
  return X;
}

Matrix ls_bmgs_reorth(MatrixView S, MatrixView P, const BlockPartition& blocks, std::size_t iterations,
                      PrecisionSpec prec) {
  if (S.rows != P.rows) throw DimensionError("least squares: S and P row counts differ");
  if (blocks.total_cols() != S.cols) throw DimensionError("block partition does not match S");
  Matrix X(S.cols, P.cols, prec);
  Matrix res(P, prec);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t b = 0; b < blocks.num_blocks(); ++b) {
      const MatrixView Sb = S.columns(blocks.offset(b), blocks.width(b));
      const Matrix C = multiply(Sb, res, prec, Trans::yes);
      const Matrix Xb = add(X.view(blocks.offset(b), 0, blocks.width(b), P.cols), C);
      X.set_block(blocks.offset(b), 0, Xb);
      res = subtract_product(res, Sb, C, prec);
    }
  }
  return X;
}

namespace {

template <class T>
Matrix cg_impl(MatrixView S, MatrixView P, std::size_t iterations, PrecisionSpec prec) {
  const std::size_t k = S.rows, c = S.cols;
  std::vector<T> s(k * c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < k; ++i) s[i + j * k] = static_cast<T>(S(i, j));
  auto dot = [](const T* a, const T* b, std::size_t n) {
    T acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc = acc + a[i] * b[i];
    return acc;
  };
  Matrix X(c, P.cols, prec);
  std::vector<T> p(k), x(c), r(c), d(c), q(c), z(k);
  for (std::size_t col = 0; col < P.cols; ++col) {
    for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<T>(P(i, col));
    for (std::size_t j = 0; j < c; ++j) r[j] = dot(s.data() + j * k, p.data(), k);
    std::fill(x.begin(), x.end(), T(0));
    d = r;
    T rr = dot(r.data(), r.data(), c);
    for (std::size_t it = 0; it < iterations && rr != T(0); ++it) {
      std::fill(z.begin(), z.end(), T(0));
      for (std::size_t j = 0; j < c; ++j) {
        const T dj = d[j];
        const T* sj = s.data() + j * k;
        for (std::size_t i = 0; i < k; ++i) z[i] = z[i] + sj[i] * dj;
      }
      for (std::size_t j = 0; j < c; ++j) q[j] = dot(s.data() + j * k, z.data(), k);
      const T dq = dot(d.data(), q.data(), c);
      if (dq == T(0)) break;
      const T alpha = rr / dq;
      for (std::size_t j = 0; j < c; ++j) {
        x[j] = x[j] + alpha * d[j];
        r[j] = r[j] - alpha * q[j];
      }
      const T rr_new = dot(r.data(), r.data(), c);
      const T beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t j = 0; j < c; ++j) d[j] = r[j] + beta * d[j];
    }
    for (std::size_t j = 0; j < c; ++j) X(j, col) = static_cast<double>(x[j]);
  }
  return X;
}

}  // namespace

Matrix ls_cg_normal(MatrixView S, MatrixView P, std::size_t iterations, PrecisionSpec prec) {
  if (S.rows != P.rows) throw DimensionError("least squares: S and P row counts differ");
  return prec.is_coarse() ? cg_impl<float>(S, P, iterations, prec) : cg_impl<double>(S, P, iterations, prec);
}

Matrix ls_householder_direct(MatrixView S, MatrixView P, PrecisionSpec prec) {
  if (S.rows != P.rows) throw DimensionError("least squares: S and P row counts differ");
  if (!prec.is_coarse()) return least_squares(S, P);
  const QrFactors f = householder_qr(S, prec);
  return triangular_solve(f.R, multiply(f.Q, P, prec, Trans::yes), Side::left, prec);
}

Matrix solve_sketched_ls(MatrixView S, MatrixView P, const LsSolver& solver, const BlockPartition& blocks,
                         PrecisionSpec prec) {
  solver.validate();
  switch (solver.kind) {
    case LsSolver::Kind::richardson: return ls_richardson(S, P, solver.iterations, prec);
    case LsSolver::Kind::bmgs_reorth: return ls_bmgs_reorth(S, P, blocks, solver.iterations, prec);
    case LsSolver::Kind::cg_normal: return ls_cg_normal(S, P, solver.iterations, prec);
    case LsSolver::Kind::householder_direct: return ls_householder_direct(S, P, prec);
  }
  throw InvalidArgument("unknown least-squares solver");
}

InterblockResult interblock_rgs(MatrixView V, const SketchOperator& theta) {
  const std::size_t n = V.rows, w = V.cols, k = theta.rows();
  InterblockResult out{Matrix(n, w), Matrix(w, w), Matrix(k, w), theta.apply(V)};
  const double floor = static_cast<double>(n) * PrecisionSpec::fine().unit_roundoff() * frobenius_norm(V);
  for (std::size_t j = 0; j < w; ++j) {
    Matrix q(V.columns(j, 1));
    if (j > 0) {
      const Matrix r = least_squares(out.S.columns(0, j), out.S_prime.columns(j, 1));
      q = subtract_product(q, out.Q.columns(0, j), r);
      out.R.set_block(0, j, r);
    }
    Matrix s = theta.apply(q);
    const double rho = frobenius_norm(s);
    if (!(rho > floor)) throw SingularMatrix("column " + std::to_string(j) + " has a vanishing sketch", j);
    out.R(j, j) = rho;
    out.Q.set_block(0, j, scaled(q, 1.0 / rho));
    out.S.set_block(0, j, scaled(s, 1.0 / rho));
  }
  return out;
}

InterblockResult interblock_sketched_cholqr(MatrixView V, const SketchOperator& theta, std::size_t repetitions) {
  if (repetitions == 0) throw InvalidArgument("sketched Cholesky QR needs at least one repetition");
  InterblockResult out;
  out.S_prime = theta.apply(V);
  out.Q = Matrix(V);
  out.R = Matrix::identity(V.cols);
  Matrix Sp = out.S_prime;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    if (rep > 0) Sp = theta.apply(out.Q);
    const Matrix R = householder_qr(Sp).R;
    require_full_rank(R, Sp.rows(), "sketched block");
    out.Q = triangular_solve(R, out.Q, Side::right);
    out.S = triangular_solve(R, Sp, Side::right);
    out.R = multiply(R, out.R);
  }
  return out;
}

InterblockResult interblock_l2_cholqr(MatrixView V, const SketchOperator& theta) {
  const QrFactors h = householder_qr(V);
  InterblockResult out = interblock_sketched_cholqr(h.Q, theta, 1);
  out.R = multiply(out.R, h.R);
  out.S_prime = theta.apply(V);
  return out;
}

InterblockResult interblock(MatrixView V, const SketchOperator& theta, const InterblockMethod& method) {
  switch (method.kind) {
    case InterblockMethod::Kind::rgs_single: return interblock_rgs(V, theta);
    case InterblockMethod::Kind::sketched_cholqr: return interblock_sketched_cholqr(V, theta, method.repetitions);
    case InterblockMethod::Kind::l2_cholqr: return interblock_l2_cholqr(V, theta);
  }
  throw InvalidArgument("unknown inter-block method");
}

BlockQR cholesky_qr_postprocess(BlockQR qr, double cond_limit) {
  const double c = cond_estimate(qr.Q);
  if (!(c <= cond_limit)) {
    throw InvalidArgument("Cholesky QR post-processing needs cond(Q) <= " + std::to_string(cond_limit) +
                          ", got " + std::to_string(c));
  }
  const Matrix G = multiply(qr.Q, qr.Q, PrecisionSpec::fine(), Trans::yes);
  const Matrix Rp = cholesky(G);
  qr.Q = triangular_solve(Rp, qr.Q, Side::right);
  qr.R = multiply(Rp, qr.R);
  if (!qr.S.empty()) qr.S = triangular_solve(Rp, qr.S, Side::right);
  qr.cert.reset();
  return qr;
}

double certify_embedding(const SketchOperator& theta, const SketchOperator& phi, MatrixView M) {
  if (theta.cols() != M.rows || phi.cols() != M.rows) {
    throw DimensionError("certify_embedding: sketches and M disagree on the ambient dimension");
  }
  if (phi.rows() < M.cols) throw InvalidArgument("certifying sketch is too small for the subspace");
  const Matrix Rphi = householder_qr(phi.apply(M)).R;
  require_full_rank(Rphi, phi.rows(), "certifying sketch of M");
  const Matrix Y = triangular_solve(Rphi, theta.apply(M), Side::right);
  double eps = 0.0;
  for (double s : singular_values(Y)) eps = std::max(eps, std::abs(s * s - 1.0));
  if (Y.rows() < Y.cols()) eps = std::max(eps, 1.0);
  return eps;
}

}  // namespace sketchkrylov
