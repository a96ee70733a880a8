#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sketchkrylov/classic_bgs.hpp"
#include "sketchkrylov/linear_operator.hpp"
#include "sketchkrylov/rbgs.hpp"

namespace sketchkrylov {

struct ArnoldiDecomposition {
  Matrix Q;        // n x m basis, m = p * m_p
  Matrix H;        // m x (m - m_p) block upper Hessenberg, R_(1:p, 2:p)
  Matrix R_first;  // m_p x m_p, B = Q_1 R_first
  Matrix S;        // sketches; empty for classic processes
  Matrix P;
  std::optional<CertReport> cert;
  BlockPartition partition;
};

struct KrylovOptions {
  // Precision of the products with A.
  PrecisionSpec matvec = PrecisionSpec::fine();
  // GMRES stops once the max relative true residual drops to this value.
  double tolerance = 0.0;
  // Per-iteration true residuals and basis condition numbers (one extra
  // operator application per iteration).
  bool track_history = true;
};

struct ResidualSample {
  std::size_t iteration = 0;
  double residual = 0.0;  // max over right-hand sides of ||A u_i - b_i|| / ||b_i||
};

struct KrylovSolveReport {
  Matrix solution;
  std::vector<ResidualSample> residual_history;
  std::vector<double> basis_cond_history;
  // Certificate of the last cycle's basis (sketched runs only), per iteration.
  std::vector<double> delta_history;
  std::vector<double> delta_tilde_history;
  std::size_t restarts = 0;  // cycles performed
  // Set when a cycle hit an invariant Krylov space. The solve stops there
  // unless the space was invariant only to coarse accuracy.
  bool breakdown = false;
  std::size_t breakdown_order = 0;  // Krylov blocks reached at the last breakdown
};

// Factory for the block orthogonalization used inside a Krylov driver.
using OrthogonalizerFactory = std::function<std::unique_ptr<BlockOrthogonalizer>(std::size_t rows, std::size_t capacity)>;

OrthogonalizerFactory rbgs_factory(const SketchOperator& theta, const RbgsConfig& cfg);
OrthogonalizerFactory classic_factory(BgsVariant variant, PrecisionSpec precision,
                                      ClassicInterblock interblock = ClassicInterblock::householder);

// Block Arnoldi: W_1 = B, W_i = A Q_(i-1), each block orthogonalized by the
// process from `factory`. Columns of W_i that are numerically dependent are
// completed with random directions (zero rows in H). Throws DependentBlock
// when a whole block is dependent.
ArnoldiDecomposition block_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p,
                                   const OrthogonalizerFactory& factory, PrecisionSpec matvec = PrecisionSpec::fine());

ArnoldiDecomposition rbgs_arnoldi(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                                  const RbgsConfig& cfg, PrecisionSpec matvec = PrecisionSpec::fine());

ArnoldiDecomposition classic_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p, BgsVariant variant,
                                     PrecisionSpec precision = PrecisionSpec::fine(),
                                     ClassicInterblock interblock = ClassicInterblock::householder,
                                     PrecisionSpec matvec = PrecisionSpec::fine());

// Restarted block GMRES; `cycles` Arnoldi cycles of order p at most.
KrylovSolveReport block_gmres(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                              std::size_t cycles, const RbgsConfig& cfg, const KrylovOptions& options = {});

KrylovSolveReport classic_block_gmres(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t cycles,
                                      BgsVariant variant, PrecisionSpec precision,
                                      const KrylovOptions& options = {});

KrylovSolveReport gmres_with(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t cycles,
                             const OrthogonalizerFactory& factory, const KrylovOptions& options = {});

// U = Q_(1:p-1) H_(1:p-1,1:p-1)^-1 R_(1:p-1,1). Throws SingularMatrix.
Matrix block_fom(const ArnoldiDecomposition& decomp);

struct RitzIteration {
  std::size_t iteration = 0;
  double max_residual = 0.0;  // max relative true residual over the tracked pairs
  double cond_q = 0.0;
  double delta = 0.0;
  double delta_tilde = 0.0;
};

struct RitzResult {
  // m_p Ritz values, sorted by descending modulus, conjugate pairs adjacent.
  std::vector<std::complex<double>> values;
  // n x m_p, unit columns; a conjugate pair occupies two columns holding the
  // real and imaginary parts.
  Matrix vectors;
  // ||H_(p,1:p-1) y|| for each returned value (unit y).
  std::vector<double> residual_estimates;
  std::vector<RitzIteration> history;
  // Final cycle: the basis, the Hessenberg matrix and the coordinates Y of
  // the selected pairs in Q_(1:p-1) (real form, unit complex norm).
  Matrix basis;
  Matrix hessenberg;
  Matrix coordinates;
};

struct RitzOptions {
  PrecisionSpec matvec = PrecisionSpec::fine();
  // Fraction of the returned pairs tracked in the residual history.
  double tracked_fraction = 0.8;
  bool track_history = true;
};

RitzResult rayleigh_ritz(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                         std::size_t n_iter, const RbgsConfig& cfg, const RitzOptions& options = {});

// Variant with a Cholesky QR correction making Q orthonormal in l2 before
// the small eigenproblem.
RitzResult rayleigh_ritz_l2(const LinearOperator& A, MatrixView B, const SketchOperator& theta, std::size_t p,
                            std::size_t n_iter, const RbgsConfig& cfg, const RitzOptions& options = {});

// A cycle whose Arnoldi run breaks down has found an invariant subspace; its
// Ritz pairs are returned and the iteration stops there.
RitzResult rayleigh_ritz_with(const LinearOperator& A, MatrixView B, std::size_t p, std::size_t n_iter,
                              const OrthogonalizerFactory& factory, bool l2_correction,
                              const RitzOptions& options = {});

// B <- orth(A B) n_iter times (Householder), then Rayleigh quotients on the
// final block. History records one entry per iteration.
RitzResult subspace_iteration(const LinearOperator& A, MatrixView B, std::size_t n_iter,
                              const RitzOptions& options = {});

struct PolynomialBasis {
  enum class Kind { monomial, chebyshev };
  Kind kind = Kind::monomial;
  double a = -1.0;  // spectral interval for chebyshev
  double b = 1.0;

  static PolynomialBasis monomial() { return {}; }
  static PolynomialBasis chebyshev(double a, double b) { return {Kind::chebyshev, a, b}; }
};

// [p_0(A) v, ..., p_s(A) v] with p_0 = 1.
Matrix matrix_powers(const LinearOperator& A, MatrixView v, std::size_t s, const PolynomialBasis& poly,
                     PrecisionSpec matvec = PrecisionSpec::fine());

// s-step Arnoldi: blocks of widths {1, s, ..., s} (p blocks), block i built
// by the polynomial kernel from the last basis vector of block i-1. H is
// recovered from the sketches as S^+ (Theta A V) C^-1 with its entries below
// the subdiagonal set to zero. Throws DependentBlock naming the block whose
// powers became dependent.
ArnoldiDecomposition sstep_arnoldi(const LinearOperator& A, MatrixView b, const SketchOperator& theta, std::size_t p,
                                   std::size_t s, const PolynomialBasis& poly, const RbgsConfig& cfg,
                                   PrecisionSpec matvec = PrecisionSpec::fine());

}  // namespace sketchkrylov
