#include "sketchkrylov/rbgs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sketchkrylov/error.hpp"

namespace sketchkrylov {
namespace {

constexpr const char* kAdvice = "; increase the sketch dimension or change the inter-block method";

void round_columns(Matrix& M, std::size_t c0, std::size_t w, PrecisionSpec prec) {
  if (!prec.is_coarse()) return;
  for (std::size_t j = c0; j < c0 + w; ++j) {
    double* c = M.col(j);
    for (std::size_t i = 0; i < M.rows(); ++i) c[i] = static_cast<double>(static_cast<float>(c[i]));
  }
}

}  // namespace

RbgsProcess::RbgsProcess(std::size_t rows, std::size_t capacity, SketchOperator theta, const RbgsConfig& config)
    : BlockOrthogonalizer(rows, capacity),
      theta_(std::move(theta)),
      config_(config),
      s_(theta_.rows(), capacity),
      p_(theta_.rows(), capacity) {
  if (theta_.cols() != rows) {
    throw DimensionError("sketch maps R^" + std::to_string(theta_.cols()) + " but blocks live in R^" +
                         std::to_string(rows));
  }
  if (theta_.rows() < capacity) {
    throw InvalidArgument("sketch dimension " + std::to_string(theta_.rows()) + " is below the basis size " +
                          std::to_string(capacity));
  }
  config_.ls_solver.validate();
  q_.set_precision(config_.coarse);
}

void RbgsProcess::append_block(MatrixView W, std::size_t offset) {
  const std::size_t w = W.cols;
  const std::size_t block = num_blocks();
  last_p_ = theta_.apply(W, config_.fine);

  Matrix V;
  if (offset == 0) {
    V = Matrix(W);
    round_columns(V, 0, w, config_.coarse);
  } else {
    const Matrix X = solve_sketched_ls(s_.view(0, 0, s_.rows(), offset), last_p_, config_.ls_solver,
                                       partition(), config_.fine);
    r_.set_block(0, offset, X);
    V = subtract_product(W, q_.view(0, 0, q_.rows(), offset), X, config_.coarse);
  }

  const double threshold =
      static_cast<double>(W.rows) * PrecisionSpec::fine().unit_roundoff() * frobenius_norm(W);
  if (!(frobenius_norm(V) > threshold)) throw DependentBlock(block, "projected block vanished");

  auto orthonormalize = [&](const Matrix& M) {
    try {
      return interblock(M, theta_, config_.interblock);
    } catch (const SingularMatrix& e) {
      throw DependentBlock(block, std::string(e.what()) + kAdvice);
    } catch (const NotPositiveDefinite& e) {
      throw DependentBlock(block, std::string(e.what()) + kAdvice);
    }
  };

  std::vector<std::size_t> dependent;
  if (rank_completion()) {
    const double coarse = std::sqrt(static_cast<double>(offset + w)) * config_.coarse.unit_roundoff();
    dependent = dependent_columns(V, W, coarse, block);
  }

  InterblockResult ib;
  if (dependent.empty()) {
    ib = orthonormalize(V);
  } else {
    Matrix G = completion_columns(dependent.size(), offset);
    if (offset > 0) {
      const MatrixView Q = q_.view(0, 0, q_.rows(), offset);
      const MatrixView S = s_.view(0, 0, s_.rows(), offset);
      for (int pass = 0; pass < 2; ++pass) {
        const Matrix X = least_squares(S, theta_.apply(G, config_.fine));
        G = subtract_product(G, Q, X, PrecisionSpec::fine());
      }
    }
    Matrix Vc(V);
    const double scale = frobenius_norm(V) / std::sqrt(static_cast<double>(w));
    for (std::size_t c = 0; c < dependent.size(); ++c) {
      const double g = frobenius_norm(G.columns(c, 1));
      for (std::size_t i = 0; i < V.rows(); ++i) Vc(i, dependent[c]) = G(i, c) * scale / g;
    }
    ib = orthonormalize(Vc);
    // Coefficients of the actual remainder in the completed block.
    ib.R = least_squares(ib.S, theta_.apply(V, config_.fine));
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t i = j + 1; i < w; ++i) ib.R(i, j) = 0.0;
  }
  if (!ib.Q.all_finite() || !ib.R.all_finite()) throw DependentBlock(block, "inter-block QR produced non-finite values");

  q_.set_block(0, offset, ib.Q);
  round_columns(q_, offset, w, config_.coarse);
  r_.set_block(offset, offset, ib.R);
  s_.set_block(0, offset, ib.S);
  p_.set_block(0, offset, last_p_);

  if (config_.certify_blocks) {
    block_orth_.push_back(orthogonality_loss(ib.S));
    const Matrix E = subtract_product(ib.S_prime, ib.S, ib.R);
    const double sn = frobenius_norm(ib.S_prime);
    block_resid_.push_back(sn > 0.0 ? frobenius_norm(E) / sn : frobenius_norm(E));
  }
}

BlockQR RbgsProcess::result() const {
  BlockQR out = BlockOrthogonalizer::result();
  out.S = Matrix(sketched_basis());
  out.P = Matrix(sketched_input());
  if (config_.certify) {
    CertReport c = certify(out.S, out.P, out.R);
    c.block_orthogonality = block_orth_;
    c.block_residual = block_resid_;
    out.cert = std::move(c);
  }
  return out;
}

BlockQR rbgs(MatrixView W, const SketchOperator& theta, const RbgsConfig& config) {
  const BlockPartition& part = config.partition;
  if (part.total_cols() != W.cols) {
    throw DimensionError("partition covers " + std::to_string(part.total_cols()) + " columns, W has " +
                         std::to_string(W.cols));
  }
  RbgsProcess proc(W.rows, W.cols, theta, config);
  for (std::size_t b = 0; b < part.num_blocks(); ++b) {
    proc.append(W.columns(part.offset(b), part.width(b)));
  }
  return proc.result();
}

}  // namespace sketchkrylov
