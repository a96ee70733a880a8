#pragma once

#include <memory>

#include "sketchkrylov/krylov.hpp"

namespace sketchkrylov::detail {

struct ArnoldiRun {
  std::unique_ptr<BlockOrthogonalizer> orth;
  std::size_t first_width = 0;
  bool breakdown = false;
  std::size_t breakdown_block = 0;  // index of the rejected block
  bool exact_breakdown = false;     // false: invariant only to coarse accuracy
  Matrix rejected_coefficients;     // cols x width projection coefficients of the rejected block
};

// Runs block Arnoldi; on breakdown after the first block records it instead
// of throwing.
ArnoldiRun run_arnoldi(const LinearOperator& A, MatrixView B, std::size_t p, const OrthogonalizerFactory& factory,
                       PrecisionSpec matvec);

ArnoldiDecomposition assemble(const ArnoldiRun& run);

}  // namespace sketchkrylov::detail
