#include <algorithm>
#include <cmath>
#include <complex>

#include "arnoldi_internal.hpp"
#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

struct Selection {
  std::vector<std::complex<double>> values;
  Matrix Y;  // coordinates, real form
  // For each selected column: index of the partner column within Y holding
  // the imaginary part, or -1 for real values and split pairs.
  std::vector<long> partner;
  std::vector<bool> imag_part;  // column holds the imaginary part of a pair
};

// The `count` eigenpairs of largest modulus. A pair that would not fit
// contributes only the column of its real part.
Selection select_dominant(const EigenDecomposition& e, std::size_t count) {
  const std::size_t dim = e.values.size();
  count = std::min(count, dim);
  Selection sel;
  sel.Y = Matrix(dim, count);
  std::size_t c = 0, j = 0;
  while (c < count && j < dim) {
    const bool pair = e.values[j].imag() != 0.0 && j + 1 < dim;
    if (pair && c + 1 < count) {
      sel.Y.set_block(0, c, e.vectors.columns(j, 2));
      sel.values.push_back(e.values[j]);
      sel.values.push_back(e.values[j + 1]);
      sel.partner.push_back(static_cast<long>(c + 1));
      sel.partner.push_back(static_cast<long>(c));
      sel.imag_part.push_back(false);
      sel.imag_part.push_back(true);
      c += 2;
      j += 2;
    } else {
      sel.Y.set_block(0, c, e.vectors.columns(j, 1));
      sel.values.push_back(e.values[j]);
      sel.partner.push_back(-1);
      sel.imag_part.push_back(false);
      c += 1;
      j += pair ? 2 : 1;
    }
  }
  return sel;
}

// ||M y|| for each selected pair; a conjugate pair uses the complex vector.
std::vector<double> pair_norms(const Matrix& MY, const Selection& sel) {
  std::vector<double> out(sel.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double a = frobenius_norm(MY.columns(j, 1));
    if (sel.partner[j] >= 0) {
      const double b = frobenius_norm(MY.columns(static_cast<std::size_t>(sel.partner[j]), 1));
      out[j] = std::hypot(a, b);
    } else {
      out[j] = a;
    }
  }
  return out;
}

// ||A u - mu u|| / (|mu| ||u||) for each selected pair, with U = basis * Y.
std::vector<double> true_residuals(const Matrix& U, const Matrix& AU, const Selection& sel) {
  std::vector<double> out(sel.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::complex<double> mu = sel.values[j];
    double rr = 0.0, uu = 0.0;
    if (sel.partner[j] >= 0) {
      const std::size_t re = sel.imag_part[j] ? static_cast<std::size_t>(sel.partner[j]) : j;
      const std::size_t im = sel.imag_part[j] ? j : static_cast<std::size_t>(sel.partner[j]);
      // mu is the eigenvalue of u_r + i u_i for the first column of the pair.
      const std::complex<double> lam = sel.imag_part[j] ? std::conj(mu) : mu;
      for (std::size_t i = 0; i < U.rows(); ++i) {
        const std::complex<double> u(U(i, re), U(i, im));
        const std::complex<double> au(AU(i, re), AU(i, im));
        rr += std::norm(au - lam * u);
        uu += std::norm(u);
      }
    } else {
      for (std::size_t i = 0; i < U.rows(); ++i) {
        const std::complex<double> r = AU(i, j) - mu * U(i, j);
        rr += std::norm(r);
        uu += U(i, j) * U(i, j);
      }
    }
    const double scale = std::abs(mu) * std::sqrt(uu);
    out[j] = scale > 0.0 ? std::sqrt(rr) / scale : std::sqrt(rr);
  }
  return out;
}

double tracked_max(const std::vector<double>& r, double fraction) {
  if (r.empty()) return 0.0;
  const std::size_t count =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(r.size()))), 1, r.size());
  return *std::max_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(count));
}

// Unit columns; the two columns of a pair are scaled together.
Matrix normalize_pairs(Matrix U, const Selection& sel) {
  for (std::size_t j = 0; j < U.cols(); ++j) {
    if (sel.partner[j] >= 0 && sel.imag_part[j]) continue;
    double nrm = frobenius_norm(U.columns(j, 1));
    if (sel.partner[j] >= 0) nrm = std::hypot(nrm, frobenius_norm(U.columns(static_cast<std::size_t>(sel.partner[j]), 1)));
    if (nrm == 0.0) continue;
    for (std::size_t i = 0; i < U.rows(); ++i) U(i, j) /= nrm;
    if (sel.partner[j] >= 0) {
      const std::size_t im = static_cast<std::size_t>(sel.partner[j]);
      for (std::size_t i = 0; i < U.rows(); ++i) U(i, im) /= nrm;
    }
  }
  return U;
}

}  // namespace

RitzResult rayleigh_ritz_with(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t n_iter,
                              const OrthogonalizerFactory& factory, bool l2_correction, const RitzOptions& options) {
  if (n_iter == 0) throw InvalidArgument("Rayleigh-Ritz needs at least one iteration");
  const std::size_t w = B.cols;
  Matrix start(B);
  RitzResult result;
  for (std::size_t it = 0; it < n_iter; ++it) {
    detail::ArnoldiRun run = detail::run_arnoldi(A, start, p, factory, options.matvec);
    ArnoldiDecomposition d = detail::assemble(run);
    Matrix Q = std::move(d.Q);
    Matrix H = std::move(d.H);
    if (run.breakdown) {
      // The basis spans an invariant subspace: close H with the coefficients
      // of the rejected block, leaving no residual row.
      const std::size_t cols = Q.cols();
      Matrix Hsq(cols, cols);
      Hsq.set_block(0, 0, H);
      Hsq.set_block(0, cols - w, run.rejected_coefficients);
      H = std::move(Hsq);
    }
    const std::size_t c = run.breakdown ? Q.cols() : H.cols();
    if (l2_correction) {
      const Matrix Rp = cholesky(multiply(Q, Q, PrecisionSpec::fine(), Trans::yes));
      Q = triangular_solve(Rp, Q, Side::right);
      H = triangular_solve(Rp.view(0, 0, c, c), multiply(Rp, H), Side::right);
    }
    const Matrix Hs = H.block(0, 0, c, c);
    const Matrix Hp = H.block(c, 0, H.rows() - c, c);
    const EigenDecomposition e = eig(Hs);
    const Selection sel = select_dominant(e, w);
    const Matrix U = multiply(Q.columns(0, c), sel.Y);

    result.values = sel.values;
    result.residual_estimates = pair_norms(multiply(Hp, sel.Y), sel);
    const bool last = it + 1 == n_iter || (run.breakdown && run.exact_breakdown);
    if (options.track_history || last) {
      RitzIteration rec;
      rec.iteration = it + 1;
      rec.max_residual = tracked_max(true_residuals(U, A.apply(U), sel), options.tracked_fraction);
      rec.cond_q = cond_estimate(Q);
      if (d.cert && !l2_correction) {
        rec.delta = d.cert->delta;
        rec.delta_tilde = d.cert->delta_tilde;
      } else {
        rec.delta = rec.delta_tilde = std::nan("");
      }
      result.history.push_back(rec);
    }
    start = normalize_pairs(U, sel);
    if (last) {
      result.vectors = start;
      result.basis = std::move(Q);
      result.hessenberg = std::move(H);
      result.coordinates = sel.Y;
      break;
    }
  }
  return result;
}

RitzResult rayleigh_ritz(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                         std::size_t n_iter, const RbgsConfig& cfg, const RitzOptions& options) {
  return rayleigh_ritz_with(A, B, p, n_iter, rbgs_factory(theta, cfg), false, options);
}

RitzResult rayleigh_ritz_l2(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                            std::size_t n_iter, const RbgsConfig& cfg, const RitzOptions& options) {
  return rayleigh_ritz_with(A, B, p, n_iter, rbgs_factory(theta, cfg), true, options);
}

RitzResult subspace_iteration(const LinearOperator& A, MatrixView B, std::size_t n_iter, const RitzOptions& options) {
  if (B.rows != A.dim()) throw DimensionError("starting block does not match the operator dimension");
  const std::size_t w = B.cols;
  Matrix V = householder_qr(B).Q;
  Matrix AV = A.apply(V, options.matvec);
  RitzResult result;
  auto ritz = [&](std::size_t iteration, bool record) {
    const Matrix T = multiply(V, AV, PrecisionSpec::fine(), Trans::yes);
    const EigenDecomposition e = eig(T);
    const Selection sel = select_dominant(e, w);
    const Matrix U = multiply(V, sel.Y);
    const Matrix AU = multiply(AV, sel.Y);
    const std::vector<double> res = true_residuals(U, AU, sel);
    result.values = sel.values;
    result.residual_estimates = res;
    result.vectors = normalize_pairs(U, sel);
    result.coordinates = sel.Y;
    if (record) {
      RitzIteration rec;
      rec.iteration = iteration;
      rec.max_residual = tracked_max(res, options.tracked_fraction);
      rec.cond_q = 1.0;
      rec.delta = rec.delta_tilde = std::nan("");
      result.history.push_back(rec);
    }
  };
  for (std::size_t it = 0; it < n_iter; ++it) {
    V = householder_qr(AV).Q;
    AV = A.apply(V, options.matvec);
    if (options.track_history && it + 1 < n_iter) ritz(it + 1, true);
  }
  ritz(n_iter, true);
  result.basis = V;
  return result;
}

}  // namespace sketchkrylov
