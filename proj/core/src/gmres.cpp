#include <algorithm>
#include <cmath>
#include <limits>

#include "arnoldi_internal.hpp"
#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

double max_relative_residual(const LinearOperator& A, MatrixView B, MatrixView X, const std::vector<double>& bnorm) {
  const Matrix Rres = subtract(B, A.apply(X));
  double worst = 0.0;
  for (std::size_t j = 0; j < B.cols; ++j) {
    worst = std::max(worst, frobenius_norm(Rres.columns(j, 1)) / bnorm[j]);
  }
  return worst;
}

}  // namespace

KrylovSolveReport gmres_with(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t cycles,
                             const OrthogonalizerFactory& factory, const KrylovOptions& options) {
  if (B.rows != A.dim()) throw DimensionError("right-hand sides do not match the operator dimension");
  if (cycles == 0) throw InvalidArgument("GMRES needs at least one cycle");
  const std::size_t n = B.rows, s = B.cols;
  std::vector<double> bnorm(s);
  for (std::size_t j = 0; j < s; ++j) {
    bnorm[j] = frobenius_norm(B.columns(j, 1));
    if (bnorm[j] == 0.0) bnorm[j] = 1.0;
  }

  KrylovSolveReport report;
  report.solution = Matrix(n, s);
  Matrix residual(B);
  double current = max_relative_residual(A, B, report.solution, bnorm);
  std::size_t iteration = 0;

  for (std::size_t cycle = 0; cycle < cycles; ++cycle) {
    if (current <= options.tolerance || current == 0.0) break;
    detail::ArnoldiRun run = detail::run_arnoldi(A, residual, p, factory, options.matvec);
    const BlockQR qr = run.orth->result();
    const std::size_t blocks = qr.partition.num_blocks();
    const std::size_t c = qr.Q.cols();

    // Columns of H: A Q_1 ... A Q_(blocks-1), plus A Q_blocks on breakdown.
    Matrix Hfull;
    if (run.breakdown) {
      Hfull = Matrix(c, c);
      Hfull.set_block(0, 0, qr.R.view(0, s, c, c - s));
      Hfull.set_block(0, c - s, run.rejected_coefficients);
    } else {
      Hfull = qr.R.block(0, s, c, c - s);
    }
    Matrix E(c, s);
    E.set_block(0, 0, qr.R.view(0, 0, s, s));

    std::vector<double> conds;
    if (options.track_history) conds = prefix_condition_numbers(qr.Q, qr.partition);

    const std::size_t last = run.breakdown ? blocks : blocks - 1;
    const std::size_t first = options.track_history ? 1 : last;
    Matrix update;
    for (std::size_t j = first; j <= last; ++j) {
      const std::size_t ncols = qr.partition.offset(j - 1) + qr.partition.width(j - 1);
      const std::size_t nrows = (run.breakdown && j == blocks) ? ncols : ncols + qr.partition.width(j);
      const Matrix Y = least_squares(Hfull.view(0, 0, nrows, ncols), E.view(0, 0, nrows, s));
      update = gemm(1.0, qr.Q.columns(0, ncols), Y, 1.0, report.solution, PrecisionSpec::fine());
      ++iteration;
      if (options.track_history) {
        report.residual_history.push_back({iteration, max_relative_residual(A, B, update, bnorm)});
        const std::size_t cond_block = (run.breakdown && j == blocks) ? j - 1 : j;
        report.basis_cond_history.push_back(conds[cond_block]);
        if (!qr.S.empty()) {
          const std::size_t cc = nrows;
          const CertReport cert = certify(qr.S.columns(0, cc), qr.P.columns(0, cc), qr.R.view(0, 0, cc, cc));
          report.delta_history.push_back(cert.delta);
          report.delta_tilde_history.push_back(cert.delta_tilde);
        } else {
          report.delta_history.push_back(std::numeric_limits<double>::quiet_NaN());
          report.delta_tilde_history.push_back(std::numeric_limits<double>::quiet_NaN());
        }
      }
    }
    report.solution = std::move(update);
    report.restarts = cycle + 1;
    residual = subtract(B, A.apply(report.solution));
    current = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      current = std::max(current, frobenius_norm(residual.columns(j, 1)) / bnorm[j]);
    }
    if (!options.track_history) {
      report.residual_history.push_back({iteration, current});
      report.basis_cond_history.push_back(cond_estimate(qr.Q));
      report.delta_history.push_back(qr.cert ? qr.cert->delta : std::numeric_limits<double>::quiet_NaN());
      report.delta_tilde_history.push_back(qr.cert ? qr.cert->delta_tilde : std::numeric_limits<double>::quiet_NaN());
    }
    if (run.breakdown) {
      report.breakdown = true;
      report.breakdown_order = blocks;
      // An invariant space at coarse accuracy only: restarting from the f64
      // residual still makes progress.
      if (run.exact_breakdown) break;
    }
  }
  if (report.residual_history.empty()) {
    report.residual_history.push_back({0, current});
    report.basis_cond_history.push_back(1.0);
    report.delta_history.push_back(std::numeric_limits<double>::quiet_NaN());
    report.delta_tilde_history.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

KrylovSolveReport block_gmres(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                              std::size_t cycles, const RbgsConfig& cfg, const KrylovOptions& options) {
  if (p * B.cols > theta.rows()) throw InvalidArgument("Krylov basis larger than the sketch dimension");
  return gmres_with(A, B, p, cycles, rbgs_factory(theta, cfg), options);
}

KrylovSolveReport classic_block_gmres(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t cycles,
                                      BgsVariant variant, PrecisionSpec precision, const KrylovOptions& options) {
  return gmres_with(A, B, p, cycles, classic_factory(variant, precision), options);
}

}  // namespace sketchkrylov
