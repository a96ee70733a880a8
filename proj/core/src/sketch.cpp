#include "sketchkrylov/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/philox.hpp"

namespace sketchkrylov {

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint64_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

std::uint32_t PhiloxStream::next_u32() noexcept {
  if (used_ == 4) {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                             stream_, 0u},
                            key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

std::uint64_t PhiloxStream::next_u64() noexcept {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

std::uint64_t PhiloxStream::bounded(std::uint64_t range) noexcept {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % range;
}

double PhiloxStream::uniform() noexcept {
  std::uint64_t v;
  do {
    v = next_u64() >> 11;
  } while (v == 0);
  return static_cast<double>(v) * 0x1p-53;
}

double PhiloxStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::rademacher: return "rademacher";
    case SketchKind::srht: return "srht";
    case SketchKind::identity: return "identity";
  }
  return "unknown";
}

SketchKind parse_sketch_kind(const std::string& name) {
  if (name == "rademacher") return SketchKind::rademacher;
  if (name == "srht") return SketchKind::srht;
  if (name == "identity") return SketchKind::identity;
  throw InvalidArgument("unknown sketch kind '" + name + "'");
}

void EmbeddingParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (d == 0) throw InvalidArgument("subspace dimension must be positive");
}

std::size_t min_sketch_dim(const EmbeddingParams& p, SketchKind kind, std::size_t n) {
  p.validate();
  if (n == 0) throw InvalidArgument("ambient dimension must be positive");
  const double eps = p.epsilon, delta = p.delta, d = static_cast<double>(p.d);
  switch (kind) {
    case SketchKind::rademacher:
      return std::min(n, static_cast<std::size_t>(std::ceil(7.87 / (eps * eps) * (6.9 * d + std::log(1.0 / delta)))));
    case SketchKind::srht: {
      const double root = std::sqrt(d) + std::sqrt(8.0 * std::log(6.0 * static_cast<double>(n) / delta));
      const double k = 2.0 / (eps * eps - eps * eps * eps / 3.0) * root * root * std::log(3.0 * d / delta);
      return std::min(n, static_cast<std::size_t>(std::ceil(k)));
    }
    case SketchKind::identity:
      return n;
  }
  return n;
}

SketchOperator SketchOperator::make(SketchKind kind, std::size_t k, std::size_t n, std::uint64_t seed) {
  if (k == 0 || n == 0) throw InvalidArgument("sketch dimensions must be positive");
  SketchOperator op;
  op.kind_ = kind;
  op.k_ = k;
  op.n_ = n;
  op.n_pad_ = n;
  op.seed_ = seed;
  switch (kind) {
    case SketchKind::identity:
      if (k != n) throw InvalidArgument("identity sketch needs k == n");
      break;
    case SketchKind::rademacher:
      if (k > n) throw InvalidArgument("sketch dimension " + std::to_string(k) + " exceeds n = " + std::to_string(n));
      break;
    case SketchKind::srht: {
      op.n_pad_ = std::bit_ceil(n);
      if (k > n) throw InvalidArgument("sketch dimension " + std::to_string(k) + " exceeds n = " + std::to_string(n));
      PhiloxStream sign_stream(seed, 1);
      op.signs_.resize(n);
      std::uint32_t word = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % 32 == 0) word = sign_stream.next_u32();
        op.signs_[i] = ((word >> (i % 32)) & 1u) ? 1.0 : -1.0;
      }
      PhiloxStream index_stream(seed, 2);
      std::vector<std::size_t> perm(op.n_pad_);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(index_stream.bounded(op.n_pad_ - i));
        std::swap(perm[i], perm[j]);
      }
      op.sampled_.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(op.sampled_.begin(), op.sampled_.end());
      break;
    }
  }
  return op;
}

SketchOperator SketchOperator::srht_from_parts(std::size_t n, std::vector<double> signs,
                                               std::vector<std::size_t> rows) {
  if (n == 0 || signs.size() != n) throw DimensionError("srht signs must have n entries");
  for (double s : signs) {
    if (s != 1.0 && s != -1.0) throw InvalidArgument("srht signs must be +-1");
  }
  SketchOperator op;
  op.kind_ = SketchKind::srht;
  op.n_ = n;
  op.n_pad_ = std::bit_ceil(n);
  std::sort(rows.begin(), rows.end());
  if (rows.empty() || rows.back() >= op.n_pad_ ||
      std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    throw InvalidArgument("srht rows must be distinct indices below the padded size");
  }
  op.k_ = rows.size();
  op.signs_ = std::move(signs);
  op.sampled_ = std::move(rows);
  op.from_parts_ = true;
  return op;
}

namespace {

template <class T>
void fwht_impl(T* x, std::size_t n) {
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      T* a = x + i;
      T* b = x + i + h;
      for (std::size_t j = 0; j < h; ++j) {
        const T u = a[j], v = b[j];
        a[j] = u + v;
        b[j] = u - v;
      }
    }
  }
}

// Signs of one operator column at a time, reusing the current Philox block.
class RademacherColumns {
 public:
  explicit RademacherColumns(const SketchOperator& op) : k_(op.rows()), key_(philox_key(op.seed())) {}

  template <class T>
  void fill(std::size_t col, T* sgn) {
    const std::uint64_t e0 = static_cast<std::uint64_t>(col) * k_;
    for (std::size_t r = 0; r < k_; ++r) {
      const std::uint64_t e = e0 + r;
      const std::uint64_t b = e >> 7;
      if (b != cached_) {
        block_ = philox4x32_10({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), 0u, 0u}, key_);
        cached_ = b;
      }
      const std::uint32_t bit = (block_[(e >> 5) & 3u] >> (e & 31u)) & 1u;
      sgn[r] = bit ? T(1) : T(-1);
    }
  }

 private:
  std::size_t k_;
  PhiloxKey key_;
  std::uint64_t cached_ = UINT64_MAX;
  PhiloxCounter block_{};
};

template <class T>
Matrix apply_rademacher(const SketchOperator& op, MatrixView X, PrecisionSpec prec) {
  const std::size_t k = op.rows(), n = op.cols(), c = X.cols;
  std::vector<T> acc(k * c, T(0));
  std::vector<T> sgn(k);
  RademacherColumns gen(op);
  for (std::size_t col = 0; col < n; ++col) {
    gen.fill(col, sgn.data());
    for (std::size_t j = 0; j < c; ++j) {
      const T xv = static_cast<T>(X(col, j));
      if (xv == T(0)) continue;
      T* out = acc.data() + j * k;
      for (std::size_t r = 0; r < k; ++r) out[r] = out[r] + sgn[r] * xv;
    }
  }
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(k)));
  Matrix Y(k, c, prec);
  for (std::size_t i = 0; i < k * c; ++i) Y.data()[i] = static_cast<double>(acc[i] * scale);
  return Y;
}

template <class T>
Matrix apply_srht(const SketchOperator& op, MatrixView X, PrecisionSpec prec) {
  const std::size_t k = op.rows(), n = op.cols(), n_pad = op.padded_cols(), c = X.cols;
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<T> buf(n_pad);
  std::vector<T> sg(op.signs().begin(), op.signs().end());
  Matrix Y(k, c, prec);
  for (std::size_t j = 0; j < c; ++j) {
    const double* x = X.col(j);
    for (std::size_t i = 0; i < n; ++i) buf[i] = sg[i] * static_cast<T>(x[i]);
    std::fill(buf.begin() + static_cast<std::ptrdiff_t>(n), buf.end(), T(0));
    fwht_impl(buf.data(), n_pad);
    double* y = Y.col(j);
    for (std::size_t r = 0; r < k; ++r) y[r] = static_cast<double>(buf[op.sampled_rows()[r]] * scale);
  }
  return Y;
}

}  // namespace

void fwht(double* x, std::size_t n) { fwht_impl(x, n); }
void fwht(float* x, std::size_t n) { fwht_impl(x, n); }

Matrix SketchOperator::apply(MatrixView X, PrecisionSpec prec) const {
  if (X.rows != n_) {
    throw DimensionError("sketch maps R^" + std::to_string(n_) + " but input has " +
                         std::to_string(X.rows) + " rows");
  }
  switch (kind_) {
    case SketchKind::identity: {
      Matrix Y(X, prec);
      if (prec.is_coarse()) {
        for (std::size_t i = 0; i < Y.rows() * Y.cols(); ++i) {
          Y.data()[i] = static_cast<double>(static_cast<float>(Y.data()[i]));
        }
      }
      return Y;
    }
    case SketchKind::rademacher:
      return prec.is_coarse() ? apply_rademacher<float>(*this, X, prec)
                              : apply_rademacher<double>(*this, X, prec);
    case SketchKind::srht:
      return prec.is_coarse() ? apply_srht<float>(*this, X, prec) : apply_srht<double>(*this, X, prec);
  }
  throw InvalidArgument("sketch operator is not initialized");
}

double SketchOperator::entry(std::size_t r, std::size_t c) const {
  if (r >= k_ || c >= n_) throw DimensionError("sketch entry out of range");
  switch (kind_) {
    case SketchKind::identity:
      return r == c ? 1.0 : 0.0;
    case SketchKind::rademacher: {
      const std::uint64_t e = static_cast<std::uint64_t>(c) * k_ + r;
      const std::uint64_t b = e >> 7;
      const PhiloxCounter blk =
          philox4x32_10({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), 0u, 0u},
                        philox_key(seed_));
      const bool plus = (blk[(e >> 5) & 3u] >> (e & 31u)) & 1u;
      return (plus ? 1.0 : -1.0) / std::sqrt(static_cast<double>(k_));
    }
    case SketchKind::srht: {
      const bool negative = std::popcount(sampled_[r] & c) % 2 == 1;
      return (negative ? -1.0 : 1.0) * signs_[c] / std::sqrt(static_cast<double>(k_));
    }
  }
  return 0.0;
}

Matrix SketchOperator::materialize() const {
  Matrix T(k_, n_);
  for (std::size_t c = 0; c < n_; ++c)
    for (std::size_t r = 0; r < k_; ++r) T(r, c) = entry(r, c);
  return T;
}

std::string SketchOperator::serialize() const {
  if (from_parts_) throw InvalidArgument("an operator built from explicit parts has no seed to serialize");
  std::ostringstream os;
  os << to_string(kind_) << ' ' << k_ << ' ' << n_ << ' ' << seed_;
  return os.str();
}

SketchOperator SketchOperator::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  unsigned long long k = 0, n = 0, seed = 0;
  std::string extra;
  if (!(is >> kind >> k >> n >> seed) || (is >> extra)) {
    throw ParseError("expected 'kind k n seed', got '" + text + "'", 1);
  }
  try {
    return make(parse_sketch_kind(kind), k, n, seed);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 1);
  }
}

bool operator==(const SketchOperator& a, const SketchOperator& b) {
  return a.kind_ == b.kind_ && a.k_ == b.k_ && a.n_ == b.n_ && a.seed_ == b.seed_ &&
         a.signs_ == b.signs_ && a.sampled_ == b.sampled_;
}

EmbeddingCheck check_embedding(const SketchOperator& theta, MatrixView V, double epsilon) {
  if (V.rows != theta.cols()) throw DimensionError("subspace basis does not match the sketch");
  const QrFactors f = householder_qr(V);
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < V.cols; ++j) {
    rmax = std::max(rmax, std::abs(f.R(j, j)));
    rmin = std::min(rmin, std::abs(f.R(j, j)));
  }
  if (!(rmin > static_cast<double>(V.rows) * 0x1p-53 * rmax)) {
    throw SingularMatrix("subspace basis is rank deficient", 0);
  }
  const Matrix TQ = theta.apply(f.Q);
  EmbeddingCheck out;
  for (double s : singular_values(TQ)) {
    out.observed_epsilon = std::max(out.observed_epsilon, std::abs(s * s - 1.0));
  }
  // A rank-deficient sketch loses singular values entirely.
  if (TQ.rows() < TQ.cols()) out.observed_epsilon = std::max(out.observed_epsilon, 1.0);
  out.holds = out.observed_epsilon <= epsilon;
  return out;
}

NormCheck operator_norm_bound_check(const SketchOperator& theta, double tolerance) {
  NormCheck out;
  out.expected = std::sqrt(static_cast<double>(theta.cols()));
  double ssq = 0.0;
  switch (theta.kind()) {
    case SketchKind::identity:
      ssq = static_cast<double>(theta.cols());
      break;
    case SketchKind::rademacher: {
      RademacherColumns gen(theta);
      std::vector<double> sgn(theta.rows());
      const double scale = 1.0 / std::sqrt(static_cast<double>(theta.rows()));
      for (std::size_t c = 0; c < theta.cols(); ++c) {
        gen.fill(c, sgn.data());
        for (double s : sgn) ssq += (s * scale) * (s * scale);
      }
      break;
    }
    case SketchKind::srht:
      for (std::size_t c = 0; c < theta.cols(); ++c)
        for (std::size_t r = 0; r < theta.rows(); ++r) {
          const double v = theta.entry(r, c);
          ssq += v * v;
        }
      break;
  }
  out.frobenius = std::sqrt(ssq);
  out.holds = std::abs(out.frobenius - out.expected) <= tolerance * std::max(1.0, out.expected);
  return out;
}

}  // namespace sketchkrylov
