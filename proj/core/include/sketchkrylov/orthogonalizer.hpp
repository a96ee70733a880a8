#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sketchkrylov/matrix.hpp"

namespace sketchkrylov {

struct CertReport {
  double delta = 0.0;        // ||I - S^T S||_F
  double delta_tilde = 0.0;  // ||P - S R||_F / ||P||_F
  // Filled when per-block certification is enabled:
  // ||I - S_i^T S_i||_F and ||S'_i - S_i R_ii||_F / ||S'_i||_F.
  std::vector<double> block_orthogonality;
  std::vector<double> block_residual;
};

struct BlockQR {
  Matrix Q;  // n x m
  Matrix R;  // m x m block upper triangular
  Matrix S;  // k x m sketched basis; empty for unsketched methods
  Matrix P;  // k x m sketch of the input; empty for unsketched methods
  BlockPartition partition;
  std::optional<CertReport> cert;
};

// Incremental block orthogonalization. Each append() extends the basis by
// the orthogonalized block and fills the corresponding columns of R.
class BlockOrthogonalizer {
 public:
  BlockOrthogonalizer(std::size_t rows, std::size_t capacity);
  virtual ~BlockOrthogonalizer() = default;
  BlockOrthogonalizer(const BlockOrthogonalizer&) = delete;
  BlockOrthogonalizer& operator=(const BlockOrthogonalizer&) = delete;

  // Throws DependentBlock when the block is numerically in the span of the
  // basis. The projection coefficients of the rejected block remain
  // readable through coefficients() afterwards; the basis is unchanged.
  void append(MatrixView block);

  std::size_t rows() const noexcept { return q_.rows(); }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t capacity() const noexcept { return q_.cols(); }
  std::size_t num_blocks() const noexcept { return widths_.size(); }
  BlockPartition partition() const { return BlockPartition::from_widths(widths_); }

  MatrixView basis() const { return q_.view(0, 0, q_.rows(), cols_); }
  MatrixView r_factor() const { return r_.view(0, 0, cols_, cols_); }
  // Rows 0..c0+width of R columns c0..c0+width, including a rejected block.
  MatrixView coefficients(std::size_t c0, std::size_t width) const {
    return r_.view(0, c0, c0 + width, width);
  }

  virtual BlockQR result() const;

  // When enabled (the Krylov drivers do), columns of a block that are
  // numerically dependent on the basis and on the preceding columns are
  // replaced by random directions orthogonalized against the basis; the
  // matching rows of R are zero. Without it such columns enter the basis as
  // normalized rounding noise. A block with no independent column still
  // throws DependentBlock.
  void set_rank_completion(bool on) noexcept { complete_rank_ = on; }
  bool rank_completion() const noexcept { return complete_rank_; }

 protected:
  virtual void append_block(MatrixView block, std::size_t offset) = 0;

  // Deterministic Gaussian columns for completing the block at `offset`.
  Matrix completion_columns(std::size_t count, std::size_t offset) const;
  // Columns j of V with |R_jj| <= coarse_tol * ||W||_F in the Householder QR
  // of V. Throws DependentBlock when no column is left; the error is exact
  // when every |R_jj| is also below rows * u_fine * ||W||_F.
  static std::vector<std::size_t> dependent_columns(MatrixView V, MatrixView W, double coarse_tol,
                                                    std::size_t block);

  Matrix q_;
  Matrix r_;

 private:
  bool complete_rank_ = false;
  std::size_t cols_ = 0;
  std::vector<std::size_t> widths_;
};

// ||I - S^T S||_F and ||P - S R||_F / ||P||_F in binary64. Throws
// InvalidArgument for P = 0.
CertReport certify(MatrixView S, MatrixView P, MatrixView R);

}  // namespace sketchkrylov
