#include <string>

#include "arnoldi_internal.hpp"
#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {

OrthogonalizerFactory rbgs_factory(const SketchOperator& theta, const RbgsConfig& cfg) {
  return [theta, cfg](std::size_t rows, std::size_t capacity) -> std::unique_ptr<BlockOrthogonalizer> {
    return std::make_unique<RbgsProcess>(rows, capacity, theta, cfg);
  };
}

OrthogonalizerFactory classic_factory(BgsVariant variant, PrecisionSpec precision, ClassicInterblock interblock) {
  return [=](std::size_t rows, std::size_t capacity) -> std::unique_ptr<BlockOrthogonalizer> {
    return std::make_unique<ClassicBgsProcess>(rows, capacity, variant, precision, interblock);
  };
}

namespace detail {

ArnoldiRun run_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p, const OrthogonalizerFactory& factory,
                       PrecisionSpec matvec) {
  if (B.rows != A.dim()) {
    throw DimensionError("starting block has " + std::to_string(B.rows) + " rows, operator dimension is " +
                         std::to_string(A.dim()));
  }
  if (B.cols == 0) throw InvalidArgument("starting block is empty");
  if (p < 2) throw InvalidArgument("Arnoldi needs at least two blocks");
  const std::size_t w = B.cols;
  ArnoldiRun run;
  run.first_width = w;
  run.orth = factory(B.rows, p * w);
  run.orth->set_rank_completion(true);
  run.orth->append(B);
  for (std::size_t i = 1; i < p; ++i) {
    const std::size_t c = run.orth->cols();
    const Matrix W = A.apply(run.orth->basis().columns(c - w, w), matvec);
    try {
      run.orth->append(W);
    } catch (const DependentBlock& e) {
      run.breakdown = true;
      run.breakdown_block = i;
      run.exact_breakdown = e.exact();
      run.rejected_coefficients = Matrix(run.orth->coefficients(c, w)).block(0, 0, c, w);
      break;
    }
  }
  return run;
}

ArnoldiDecomposition assemble(const ArnoldiRun& run) {
  BlockQR qr = run.orth->result();
  const std::size_t m = qr.Q.cols(), w = run.first_width;
  ArnoldiDecomposition d;
  d.H = qr.R.block(0, w, m, m - w);
  d.R_first = qr.R.block(0, 0, w, w);
  d.Q = std::move(qr.Q);
  d.S = std::move(qr.S);
  d.P = std::move(qr.P);
  d.cert = std::move(qr.cert);
  d.partition = std::move(qr.partition);
  return d;
}

}  // namespace detail

ArnoldiDecomposition block_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p,
                                   const OrthogonalizerFactory& factory, PrecisionSpec matvec) {
  detail::ArnoldiRun run = detail::run_arnoldi(A, B, p, factory, matvec);
  if (run.breakdown) {
    throw DependentBlock(run.breakdown_block,
                         "Krylov space became invariant after " + std::to_string(run.breakdown_block) + " blocks");
  }
  return detail::assemble(run);
}

ArnoldiDecomposition rbgs_arnoldi(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                                  const RbgsConfig& cfg, PrecisionSpec matvec) {
  return block_arnoldi(A, B, p, rbgs_factory(theta, cfg), matvec);
}

ArnoldiDecomposition classic_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p, BgsVariant variant,
                                     PrecisionSpec precision, ClassicInterblock interblock, PrecisionSpec matvec) {
  return block_arnoldi(A, B, p, classic_factory(variant, precision, interblock), matvec);
}

Matrix block_fom(const ArnoldiDecomposition& decomp) {
  const std::size_t w = decomp.R_first.rows();
  const std::size_t c = decomp.H.cols();
  if (c == 0) throw InvalidArgument("FOM needs at least two Arnoldi blocks");
  const Matrix Hs = decomp.H.block(0, 0, c, c);
  Matrix E(c, w);
  E.set_block(0, 0, decomp.R_first);
  const Matrix Y = least_squares(Hs, E);
  return multiply(decomp.Q.columns(0, c), Y);
}

}  // namespace sketchkrylov
