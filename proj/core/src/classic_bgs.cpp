#include "sketchkrylov/classic_bgs.hpp"

#include <algorithm>
#include <cmath>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"

namespace sketchkrylov {

std::string to_string(BgsVariant v) {
  switch (v) {
    case BgsVariant::bcgs: return "bcgs";
    case BgsVariant::bmgs: return "bmgs";
    case BgsVariant::bcgs2: return "bcgs2";
  }
  return "unknown";
}

BgsVariant parse_bgs_variant(const std::string& name) {
  if (name == "bcgs") return BgsVariant::bcgs;
  if (name == "bmgs") return BgsVariant::bmgs;
  if (name == "bcgs2") return BgsVariant::bcgs2;
  throw InvalidArgument("unknown block Gram-Schmidt variant '" + name + "'");
}

std::string to_string(ClassicInterblock v) {
  switch (v) {
    case ClassicInterblock::householder: return "householder";
    case ClassicInterblock::cgs2: return "cgs2";
    case ClassicInterblock::cholqr: return "cholqr";
  }
  return "unknown";
}

ClassicInterblock parse_classic_interblock(const std::string& name) {
  if (name == "householder") return ClassicInterblock::householder;
  if (name == "cgs2") return ClassicInterblock::cgs2;
  if (name == "cholqr") return ClassicInterblock::cholqr;
  throw InvalidArgument("unknown inter-block method '" + name + "'");
}

namespace {

QrFactors cgs2_block(MatrixView V) {
  const std::size_t n = V.rows, w = V.cols;
  QrFactors f{Matrix(n, w), Matrix(w, w)};
  std::vector<double> v(n);
  for (std::size_t j = 0; j < w; ++j) {
    std::copy_n(V.col(j), n, v.begin());
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<double> c(j, 0.0);
      for (std::size_t l = 0; l < j; ++l) {
        const double* q = f.Q.col(l);
        for (std::size_t i = 0; i < n; ++i) c[l] += q[i] * v[i];
      }
      for (std::size_t l = 0; l < j; ++l) {
        const double* q = f.Q.col(l);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c[l] * q[i];
        f.R(l, j) += c[l];
      }
    }
    double rho = 0.0;
    for (double x : v) rho += x * x;
    rho = std::sqrt(rho);
    if (rho == 0.0) throw SingularMatrix("column " + std::to_string(j) + " is dependent", j);
    f.R(j, j) = rho;
    double* q = f.Q.col(j);
    for (std::size_t i = 0; i < n; ++i) q[i] = v[i] / rho;
  }
  return f;
}

void round_to(Matrix& M, std::size_t c0, std::size_t w, PrecisionSpec prec) {
  if (!prec.is_coarse()) return;
  for (std::size_t j = c0; j < c0 + w; ++j) {
    double* c = M.col(j);
    for (std::size_t i = 0; i < M.rows(); ++i) c[i] = static_cast<double>(static_cast<float>(c[i]));
  }
}

}  // namespace

QrFactors classic_interblock(MatrixView V, ClassicInterblock method) {
  switch (method) {
    case ClassicInterblock::householder:
      return householder_qr(V);
    case ClassicInterblock::cgs2:
      return cgs2_block(V);
    case ClassicInterblock::cholqr: {
      const Matrix G = multiply(V, V, PrecisionSpec::fine(), Trans::yes);
      QrFactors f;
      f.R = cholesky(G);
      f.Q = triangular_solve(f.R, V, Side::right);
      return f;
    }
  }
  throw InvalidArgument("unknown inter-block method");
}

ClassicBgsProcess::ClassicBgsProcess(std::size_t rows, std::size_t capacity, BgsVariant variant,
                                     PrecisionSpec precision, ClassicInterblock interblock)
    : BlockOrthogonalizer(rows, capacity), variant_(variant), precision_(precision), interblock_(interblock) {
  q_.set_precision(precision);
}

// V minus its projection onto the current basis, in the sweep precision.
// coeffs receives the offset x width projection coefficients.
Matrix ClassicBgsProcess::project(MatrixView V, std::size_t offset, Matrix& coeffs) const {
  const MatrixView Q = q_.view(0, 0, q_.rows(), offset);
  if (variant_ != BgsVariant::bmgs) {
    coeffs = multiply(Q, V, precision_, Trans::yes);
    return subtract_product(V, Q, coeffs, precision_);
  }
  coeffs = Matrix(offset, V.cols);
  Matrix cur(V);
  const BlockPartition part = partition();
  for (std::size_t b = 0; b < offsets_.size(); ++b) {
    const MatrixView Qb = q_.view(0, offsets_[b], q_.rows(), part.width(b));
    const Matrix C = multiply(Qb, cur, precision_, Trans::yes);
    cur = subtract_product(cur, Qb, C, precision_);
    coeffs.set_block(offsets_[b], 0, C);
  }
  return cur;
}

void ClassicBgsProcess::append_block(MatrixView W, std::size_t offset) {
  const std::size_t w = W.cols;
  const std::size_t block = offsets_.size();
  const double threshold = static_cast<double>(W.rows) * PrecisionSpec::fine().unit_roundoff() * frobenius_norm(W);

  auto orthonormalize = [&](const Matrix& V) {
    if (!(frobenius_norm(V) > threshold)) throw DependentBlock(block, "projected block vanished");
    try {
      return classic_interblock(V, interblock_);
    } catch (const NotPositiveDefinite& e) {
      throw DependentBlock(block, e.what());
    } catch (const SingularMatrix& e) {
      throw DependentBlock(block, e.what());
    }
  };

  Matrix X;
  Matrix V = offset == 0 ? Matrix(W) : project(W, offset, X);
  if (offset == 0 && precision_.is_coarse()) round_to(V, 0, w, precision_);
  if (offset > 0) r_.set_block(0, offset, X);

  std::vector<std::size_t> dependent;
  if (rank_completion()) {
    const double coarse = std::sqrt(static_cast<double>(offset + w)) * precision_.unit_roundoff();
    dependent = dependent_columns(V, W, coarse, block);
  }
  QrFactors f;
  if (dependent.empty()) {
    f = orthonormalize(V);
  } else {
    Matrix G = completion_columns(dependent.size(), offset);
    if (offset > 0) {
      const MatrixView Q = q_.view(0, 0, q_.rows(), offset);
      for (int pass = 0; pass < 2; ++pass) {
        G = subtract_product(G, Q, multiply(Q, G, PrecisionSpec::fine(), Trans::yes), PrecisionSpec::fine());
      }
    }
    Matrix Vc(V);
    const double scale = frobenius_norm(V) / std::sqrt(static_cast<double>(w));
    for (std::size_t c = 0; c < dependent.size(); ++c) {
      const double g = frobenius_norm(G.columns(c, 1));
      for (std::size_t i = 0; i < V.rows(); ++i) Vc(i, dependent[c]) = G(i, c) * scale / g;
    }
    f = orthonormalize(Vc);
    f.R = multiply(f.Q, V, PrecisionSpec::fine(), Trans::yes);
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t i = j + 1; i < w; ++i) f.R(i, j) = 0.0;
  }

  if (variant_ == BgsVariant::bcgs2 && offset > 0) {
    Matrix X2;
    Matrix V2 = project(f.Q, offset, X2);
    QrFactors f2 = orthonormalize(V2);
    // W = Q X1 + V1 R1 and V1 = Q X2 + Q_i R2 give
    // W = Q (X1 + X2 R1) + Q_i (R2 R1).
    X = add(X, multiply(X2, f.R));
    r_.set_block(0, offset, X);
    f.R = multiply(f2.R, f.R);
    f.Q = std::move(f2.Q);
  }

  q_.set_block(0, offset, f.Q);
  round_to(q_, offset, w, precision_);
  r_.set_block(offset, offset, f.R);
  offsets_.push_back(offset);
}

BlockQR classic_bgs(MatrixView W, const ClassicBgsConfig& config) {
  const BlockPartition& part = config.partition;
  if (part.total_cols() != W.cols) {
    throw DimensionError("partition covers " + std::to_string(part.total_cols()) + " columns, W has " +
                         std::to_string(W.cols));
  }
  ClassicBgsProcess proc(W.rows, W.cols, config.variant, config.precision, config.interblock);
  for (std::size_t b = 0; b < part.num_blocks(); ++b) {
    proc.append(W.columns(part.offset(b), part.width(b)));
  }
  return proc.result();
}

}  // namespace sketchkrylov
