#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/orthogonalizer.hpp"
#include "sketchkrylov/sketch.hpp"

namespace sketchkrylov {

// Solver for the sketched projection coefficients min_X ||S X - P||_F.
struct LsSolver {
  enum class Kind { richardson, bmgs_reorth, cg_normal, householder_direct };
  Kind kind = Kind::richardson;
  std::size_t iterations = 5;

  static LsSolver richardson(std::size_t l) { return {Kind::richardson, l}; }
  static LsSolver bmgs_reorth(std::size_t l) { return {Kind::bmgs_reorth, l}; }
  static LsSolver cg_normal(std::size_t l) { return {Kind::cg_normal, l}; }
  static LsSolver householder_direct() { return {Kind::householder_direct, 0}; }
  void validate() const;
  friend bool operator==(const LsSolver&, const LsSolver&) = default;
};

// "richardson:5", "bmgs:2", "cg:20", "householder".
std::string to_string(const LsSolver& s);
LsSolver parse_ls_solver(const std::string& text);

// Theta-orthonormalization of a single block, always in binary64.
struct InterblockMethod {
  enum class Kind { rgs_single, sketched_cholqr, l2_cholqr };
  Kind kind = Kind::l2_cholqr;
  std::size_t repetitions = 1;  // sketched_cholqr only

  static InterblockMethod rgs_single() { return {Kind::rgs_single, 1}; }
  static InterblockMethod sketched_cholqr(std::size_t l = 1) { return {Kind::sketched_cholqr, l}; }
  static InterblockMethod l2_cholqr() { return {Kind::l2_cholqr, 1}; }
  friend bool operator==(const InterblockMethod&, const InterblockMethod&) = default;
};

// "rgs", "cholqr:2", "l2_cholqr".
std::string to_string(const InterblockMethod& m);
InterblockMethod parse_interblock(const std::string& text);

struct RbgsConfig {
  BlockPartition partition;
  LsSolver ls_solver = LsSolver::richardson(5);
  InterblockMethod interblock = InterblockMethod::l2_cholqr();
  // Precision of the update Q' = W_i - Q R_(1:i-1,i).
  PrecisionSpec coarse = PrecisionSpec::coarse();
  // Precision of the sketches and of the least-squares solve.
  PrecisionSpec fine = PrecisionSpec::fine();
  bool certify_blocks = false;
  bool certify = true;
};

// Least-squares solvers. S is k x c, P is k x w; result is c x w.
Matrix ls_richardson(MatrixView S, MatrixView P, std::size_t iterations,
                     PrecisionSpec prec = PrecisionSpec::fine());
// Block MGS over the column blocks of S, repeated `iterations` times, each
// pass removing the components left in the running residual.
Matrix ls_bmgs_reorth(MatrixView S, MatrixView P, const BlockPartition& blocks, std::size_t iterations,
                      PrecisionSpec prec = PrecisionSpec::fine());
// Conjugate gradients on S^T S X = S^T P, column by column, for a fixed
// number of iterations (stopping early only on an exactly zero residual).
Matrix ls_cg_normal(MatrixView S, MatrixView P, std::size_t iterations,
                    PrecisionSpec prec = PrecisionSpec::fine());
Matrix ls_householder_direct(MatrixView S, MatrixView P, PrecisionSpec prec = PrecisionSpec::fine());

Matrix solve_sketched_ls(MatrixView S, MatrixView P, const LsSolver& solver, const BlockPartition& blocks,
                         PrecisionSpec prec);

struct InterblockResult {
  Matrix Q;        // n x w, Theta-orthonormal
  Matrix R;        // w x w upper triangular
  Matrix S;        // k x w sketch of Q as tracked by the method
  Matrix S_prime;  // Theta V of the input block
};

InterblockResult interblock_rgs(MatrixView V, const SketchOperator& theta);
// The Cholesky QR routines throw SingularMatrix when Theta V is numerically
// rank deficient.
InterblockResult interblock_sketched_cholqr(MatrixView V, const SketchOperator& theta, std::size_t repetitions);
InterblockResult interblock_l2_cholqr(MatrixView V, const SketchOperator& theta);
InterblockResult interblock(MatrixView V, const SketchOperator& theta, const InterblockMethod& method);

class RbgsProcess : public BlockOrthogonalizer {
 public:
  RbgsProcess(std::size_t rows, std::size_t capacity, SketchOperator theta, const RbgsConfig& config);

  const SketchOperator& sketch() const noexcept { return theta_; }
  MatrixView sketched_basis() const { return s_.view(0, 0, s_.rows(), cols()); }
  MatrixView sketched_input() const { return p_.view(0, 0, p_.rows(), cols()); }
  // Sketch of the most recently offered block, including a rejected one.
  MatrixView last_block_sketch() const { return last_p_.view(); }

  BlockQR result() const override;

 protected:
  void append_block(MatrixView block, std::size_t offset) override;

 private:
  SketchOperator theta_;
  RbgsConfig config_;
  Matrix s_;
  Matrix p_;
  Matrix last_p_;
  std::vector<double> block_orth_;
  std::vector<double> block_resid_;
};

// Randomized block Gram-Schmidt QR of W.
BlockQR rbgs(MatrixView W, const SketchOperator& theta, const RbgsConfig& config);

// Cholesky QR correction for a basis with cond(Q) <= cond_limit:
// R' = chol(Q^T Q), Q <- Q R'^-1, R <- R' R, S <- S R'^-1. The sketch
// certificate no longer applies and is dropped.
BlockQR cholesky_qr_postprocess(BlockQR qr, double cond_limit = 100.0);

// A posteriori embedding certificate of Theta for range(M), measured with a
// second sketch Phi: max |sigma_i^2 - 1| over the singular values of
// (Theta M) R_Phi^-1, where R_Phi is the R factor of Phi M.
double certify_embedding(const SketchOperator& theta, const SketchOperator& phi, MatrixView M);

}  // namespace sketchkrylov
