#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sketchkrylov/matrix.hpp"

namespace sketchkrylov {

enum class SketchKind { rademacher, srht, identity };

std::string to_string(SketchKind kind);
// Accepts "rademacher", "srht", "identity"; throws InvalidArgument.
SketchKind parse_sketch_kind(const std::string& name);

struct EmbeddingParams {
  double epsilon = 0.5;
  double delta = 0.01;
  std::size_t d = 1;

  void validate() const;
};

// Sketch dimension sufficient for an oblivious epsilon-embedding of every
// d-dimensional subspace with probability 1 - delta.
//   rademacher: ceil(7.87 eps^-2 (6.9 d + ln(1/delta)))
//   srht:       2 (eps^2 - eps^3/3)^-1 (sqrt(d) + sqrt(8 ln(6n/delta)))^2 ln(3d/delta)
//   identity:   n
// Both bounds are capped at n.
std::size_t min_sketch_dim(const EmbeddingParams& params, SketchKind kind, std::size_t n);

// Linear map Theta : R^n -> R^k. Immutable after construction and fully
// determined by (kind, k, n, seed).
//
// rademacher: entry (r, c) is +-1/sqrt(k); its sign is bit e mod 128 of
// Philox4x32-10 block e / 128 (key = seed), e = c*k + r, set bit meaning +1.
// Entries are generated on the fly and never stored.
//
// srht: sqrt(1/k) P H D with D the n random signs, H the unnormalized
// Walsh-Hadamard matrix of size n_pad = next power of two >= n (inputs are
// zero-padded) and P selecting k distinct rows, sorted ascending.
//
// identity: k == n, Theta = I.
//
// make() throws InvalidArgument for k > n.
class SketchOperator {
 public:
  SketchOperator() = default;
  static SketchOperator make(SketchKind kind, std::size_t k, std::size_t n, std::uint64_t seed);
  // SRHT from explicit parts: signs has n entries of +-1, rows has distinct
  // indices below n_pad.
  static SketchOperator srht_from_parts(std::size_t n, std::vector<double> signs,
                                        std::vector<std::size_t> rows);

  SketchKind kind() const noexcept { return kind_; }
  std::size_t rows() const noexcept { return k_; }
  std::size_t cols() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t padded_cols() const noexcept { return n_pad_; }
  const std::vector<double>& signs() const noexcept { return signs_; }
  const std::vector<std::size_t>& sampled_rows() const noexcept { return sampled_; }

  // Theta X. The coarse spec runs the whole transform in binary32.
  Matrix apply(MatrixView X, PrecisionSpec prec = PrecisionSpec::fine()) const;
  double entry(std::size_t r, std::size_t c) const;
  // Dense k x n matrix; intended for small operators and tests.
  Matrix materialize() const;

  // "kind k n seed"
  std::string serialize() const;
  static SketchOperator deserialize(const std::string& text);

  friend bool operator==(const SketchOperator& a, const SketchOperator& b);

 private:
  SketchKind kind_ = SketchKind::identity;
  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::size_t n_pad_ = 0;
  std::uint64_t seed_ = 0;
  bool from_parts_ = false;
  std::vector<double> signs_;
  std::vector<std::size_t> sampled_;
};

inline SketchOperator make_operator(SketchKind kind, std::size_t k, std::size_t n,
                                    std::uint64_t seed) {
  return SketchOperator::make(kind, k, n, seed);
}

// In-place unnormalized fast Walsh-Hadamard transform; n a power of two.
void fwht(double* x, std::size_t n);
void fwht(float* x, std::size_t n);

struct EmbeddingCheck {
  bool holds = false;
  // max_i |sigma_i(Theta Q)^2 - 1| for an orthonormal basis Q of range(V).
  double observed_epsilon = 0.0;
};

// Whether Theta is an epsilon-embedding of range(V). Throws SingularMatrix
// when V is numerically rank deficient.
EmbeddingCheck check_embedding(const SketchOperator& theta, MatrixView V, double epsilon);

struct NormCheck {
  double frobenius = 0.0;
  double expected = 0.0;  // sqrt(n)
  bool holds = false;
};

// Compares ||Theta||_F against sqrt(n), which both random families attain
// exactly by construction.
NormCheck operator_norm_bound_check(const SketchOperator& theta, double tolerance = 1e-10);

}  // namespace sketchkrylov
