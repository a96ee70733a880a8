#pragma once

#include <string>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/orthogonalizer.hpp"

namespace sketchkrylov {

enum class BgsVariant { bcgs, bmgs, bcgs2 };

// Orthonormalization of a single block, always in binary64.
enum class ClassicInterblock { householder, cgs2, cholqr };

std::string to_string(BgsVariant v);
BgsVariant parse_bgs_variant(const std::string& name);
std::string to_string(ClassicInterblock v);
ClassicInterblock parse_classic_interblock(const std::string& name);

struct ClassicBgsConfig {
  BgsVariant variant = BgsVariant::bcgs;
  BlockPartition partition;
  // Precision of the projection sweep.
  PrecisionSpec precision = PrecisionSpec::fine();
  ClassicInterblock interblock = ClassicInterblock::householder;
};

// Q R of one block: (Q, R) with Q^T Q = I, R upper triangular.
QrFactors classic_interblock(MatrixView V, ClassicInterblock method);

class ClassicBgsProcess : public BlockOrthogonalizer {
 public:
  ClassicBgsProcess(std::size_t rows, std::size_t capacity, BgsVariant variant,
                    PrecisionSpec precision = PrecisionSpec::fine(),
                    ClassicInterblock interblock = ClassicInterblock::householder);

 protected:
  void append_block(MatrixView block, std::size_t offset) override;

 private:
  Matrix project(MatrixView V, std::size_t offset, Matrix& coeffs) const;

  BgsVariant variant_;
  PrecisionSpec precision_;
  ClassicInterblock interblock_;
  std::vector<std::size_t> offsets_;
};

// Block QR of W with the given sweep. Throws DependentBlock when a projected
// block has norm at most n * u_fine * ||W_i||_F.
BlockQR classic_bgs(MatrixView W, const ClassicBgsConfig& config);

}  // namespace sketchkrylov
