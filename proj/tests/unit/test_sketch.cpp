#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "oracle.hpp"

namespace sketchkrylov {
namespace {

using testing::uniform_matrix;

constexpr double u_fine = 0x1p-53;

long double rademacher_bound(long double eps, long double delta, long double d) {
  return 7.87L / (eps * eps) * (6.9L * d + std::log(1.0L / delta));
}

long double srht_bound(long double eps, long double delta, long double d, long double n) {
  const long double t = std::sqrt(d) + std::sqrt(8.0L * std::log(6.0L * n / delta));
  return 2.0L / (eps * eps - eps * eps * eps / 3.0L) * t * t * std::log(3.0L * d / delta);
}

// Explicit Sylvester-Hadamard entry.
double hadamard(std::size_t i, std::size_t j) { return std::popcount(i & j) % 2 ? -1.0 : 1.0; }

Matrix naive_srht(const SketchOperator& theta, const Matrix& X) {
  const std::size_t k = theta.rows(), n = theta.cols(), np = theta.padded_cols();
  Matrix out(k, X.cols());
  for (std::size_t c = 0; c < X.cols(); ++c)
    for (std::size_t r = 0; r < k; ++r) {
      long double acc = 0.0L;
      const std::size_t row = theta.sampled_rows()[r];
      for (std::size_t j = 0; j < std::min(n, np); ++j) acc += hadamard(row, j) * theta.signs()[j] * X(j, c);
      out(r, c) = static_cast<double>(acc / std::sqrt(static_cast<long double>(k)));
    }
  return out;
}

double relative_difference(const Matrix& A, const Matrix& B) {
  return frobenius_norm(subtract(A, B)) / frobenius_norm(B);
}

TEST(MinSketchDim, RademacherReferenceValue) {
  EXPECT_EQ(min_sketch_dim({0.5, 0.01, 1}, SketchKind::rademacher, 100000), 363u);
  EXPECT_EQ(min_sketch_dim({0.5, 0.01, 1}, SketchKind::rademacher, 100000),
            static_cast<std::size_t>(std::ceil(rademacher_bound(0.5L, 0.01L, 1.0L))));
}

TEST(MinSketchDim, RademacherScalesWithInverseEpsilonSquared) {
  const auto k1 = static_cast<double>(min_sketch_dim({0.5, 0.01, 3}, SketchKind::rademacher, 1u << 30));
  const auto k2 = static_cast<double>(min_sketch_dim({0.25, 0.01, 3}, SketchKind::rademacher, 1u << 30));
  EXPECT_NEAR(k2 / k1, 4.0, 0.02);
}

TEST(MinSketchDim, SrhtMatchesIndependentEvaluation) {
  for (std::size_t n : {4096u, 1u << 20, 1u << 24}) {
    const long double ref = srht_bound(0.5L, 0.01L, 10.0L, static_cast<long double>(n));
    const std::size_t expect = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(ref)));
    EXPECT_EQ(min_sketch_dim({0.5, 0.01, 10}, SketchKind::srht, n), expect) << n;
  }
  EXPECT_EQ(min_sketch_dim({0.5, 0.01, 10}, SketchKind::srht, 4096), 4096u);
}

TEST(MinSketchDim, CapAndValidation) {
  EXPECT_EQ(min_sketch_dim({0.5, 0.01, 1}, SketchKind::rademacher, 100), 100u);
  EXPECT_EQ(min_sketch_dim({0.5, 0.01, 1}, SketchKind::identity, 77), 77u);
  EXPECT_THROW(min_sketch_dim({1.0, 0.01, 1}, SketchKind::rademacher, 100), InvalidArgument);
  EXPECT_THROW(min_sketch_dim({0.5, 0.0, 1}, SketchKind::rademacher, 100), InvalidArgument);
  EXPECT_THROW(min_sketch_dim({0.5, 0.01, 0}, SketchKind::rademacher, 100), InvalidArgument);
}

TEST(MakeOperator, IdentityAppliesExactly) {
  const SketchOperator theta = SketchOperator::make(SketchKind::identity, 5, 5, 1);
  const Matrix X = uniform_matrix(5, 3, 2);
  const Matrix Y = theta.apply(X);
  EXPECT_EQ(Y.values(), X.values());
  EXPECT_THROW(SketchOperator::make(SketchKind::identity, 4, 5, 1), InvalidArgument);
}

TEST(MakeOperator, RejectsOversizedSketch) {
  EXPECT_THROW(SketchOperator::make(SketchKind::rademacher, 11, 10, 1), InvalidArgument);
  EXPECT_THROW(SketchOperator::make(SketchKind::srht, 11, 10, 1), InvalidArgument);
  EXPECT_THROW(SketchOperator::make(SketchKind::srht, 0, 10, 1), InvalidArgument);
}

TEST(MakeOperator, DeterministicInSeed) {
  for (SketchKind kind : {SketchKind::rademacher, SketchKind::srht}) {
    const Matrix A = SketchOperator::make(kind, 20, 100, 42).materialize();
    const Matrix B = SketchOperator::make(kind, 20, 100, 42).materialize();
    const Matrix C = SketchOperator::make(kind, 20, 100, 43).materialize();
    EXPECT_EQ(A.values(), B.values());
    EXPECT_NE(A.values(), C.values());
  }
}

TEST(MakeOperator, RademacherEntriesAreBalancedSigns) {
  const std::size_t k = 200, n = 1000;
  const Matrix T = SketchOperator::make(SketchKind::rademacher, k, n, 9).materialize();
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  double sum = 0.0, sign_sum = 0.0;
  for (double v : T.values()) {
    ASSERT_EQ(std::abs(v), scale);
    sum += v;
    sign_sum += v > 0 ? 1.0 : -1.0;
  }
  const double kn = static_cast<double>(k * n);
  EXPECT_LE(std::abs(sum / kn), 3.0 / std::sqrt(kn));
  EXPECT_LE(std::abs(sign_sum / kn), 3.0 / std::sqrt(kn));
}

TEST(MakeOperator, SrhtSamplesDistinctSortedRows) {
  const SketchOperator theta = SketchOperator::make(SketchKind::srht, 64, 300, 5);
  EXPECT_EQ(theta.padded_cols(), 512u);
  const auto& rows = theta.sampled_rows();
  ASSERT_EQ(rows.size(), 64u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1], rows[i]);
  EXPECT_LT(rows.back(), 512u);
  for (double s : theta.signs()) EXPECT_EQ(std::abs(s), 1.0);
}

TEST(Apply, SrhtFirstUnitVector) {
  const SketchOperator theta = SketchOperator::srht_from_parts(4, {1, 1, 1, 1}, {0, 1, 2, 3});
  const Matrix Y = theta.apply(Matrix::from_rows({{1}, {0}, {0}, {0}}));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(Y(i, 0), 0.5);
}

TEST(Apply, SrhtMatchesExplicitHadamardProduct) {
  const SketchOperator theta = SketchOperator::make(SketchKind::srht, 64, 300, 11);
  const Matrix X = uniform_matrix(300, 4, 12);
  EXPECT_LE(relative_difference(theta.apply(X), naive_srht(theta, X)), 1e-12);
  EXPECT_LE(relative_difference(theta.materialize(), naive_srht(theta, Matrix::identity(300))), 1e-12);
}

TEST(Apply, SrhtFastPathPropertyOverSeeds) {
  PhiloxStream rng(2024, 3);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.bounded(1024);
    const std::size_t k = 1 + rng.bounded(std::min<std::size_t>(n, 48));
    const SketchOperator theta = SketchOperator::make(SketchKind::srht, k, n, 100 + trial);
    const Matrix X = uniform_matrix(n, 2, 200 + trial);
    EXPECT_LE(relative_difference(theta.apply(X), naive_srht(theta, X)), 1e-12) << "n=" << n << " k=" << k;
  }
}

TEST(Apply, RademacherMatchesMaterializedProduct) {
  const SketchOperator theta = SketchOperator::make(SketchKind::rademacher, 30, 200, 13);
  const Matrix X = uniform_matrix(200, 3, 14);
  const Matrix ref = testing::from_long(testing::long_product(theta.materialize(), X));
  const Matrix Y = theta.apply(X);
  for (std::size_t c = 0; c < 3; ++c) {
    double colnorm = 0.0, err = 0.0;
    for (std::size_t i = 0; i < 200; ++i) colnorm += X(i, c) * X(i, c);
    for (std::size_t r = 0; r < 30; ++r) err = std::max(err, std::abs(Y(r, c) - ref(r, c)));
    EXPECT_LE(err, 10 * u_fine * 200 * std::sqrt(colnorm));
  }
  for (std::size_t r = 0; r < 30; r += 7)
    for (std::size_t c = 0; c < 200; c += 13) EXPECT_EQ(theta.entry(r, c), theta.materialize()(r, c));
}

TEST(Apply, IsColumnwiseLinear) {
  for (SketchKind kind : {SketchKind::rademacher, SketchKind::srht}) {
    const SketchOperator theta = SketchOperator::make(kind, 16, 100, 15);
    const Matrix X = uniform_matrix(100, 5, 16);
    const Matrix Y = theta.apply(X);
    for (std::size_t c = 0; c < 5; ++c) {
      const Matrix y = theta.apply(X.columns(c, 1));
      for (std::size_t r = 0; r < 16; ++r) EXPECT_EQ(y(r, 0), Y(r, c));
    }
    const Matrix Z = theta.apply(X);
    EXPECT_EQ(Z.values(), Y.values());
  }
}

TEST(Apply, CoarsePathIsClose) {
  const SketchOperator theta = SketchOperator::make(SketchKind::srht, 40, 500, 17);
  const Matrix X = uniform_matrix(500, 2, 18);
  EXPECT_LE(relative_difference(theta.apply(X, PrecisionSpec::coarse()), theta.apply(X)), 1e-5);
}

TEST(Apply, RowMismatchThrows) {
  const SketchOperator theta = SketchOperator::make(SketchKind::rademacher, 10, 50, 1);
  EXPECT_THROW(theta.apply(uniform_matrix(49, 1, 1)), DimensionError);
}

TEST(CheckEmbedding, IdentityIsExact) {
  const SketchOperator theta = SketchOperator::make(SketchKind::identity, 300, 300, 1);
  const EmbeddingCheck c = check_embedding(theta, uniform_matrix(300, 7, 2), 1e-8);
  EXPECT_TRUE(c.holds);
  EXPECT_LE(c.observed_epsilon, 10 * u_fine * 7);
}

TEST(CheckEmbedding, RankDeficientInputThrows) {
  Matrix V = uniform_matrix(100, 3, 3);
  for (std::size_t i = 0; i < 100; ++i) V(i, 2) = V(i, 0) + V(i, 1);
  const SketchOperator theta = SketchOperator::make(SketchKind::rademacher, 50, 100, 1);
  EXPECT_THROW(check_embedding(theta, V, 0.5), SingularMatrix);
}

TEST(CheckEmbedding, RademacherSingleVectorFailureRate) {
  const std::size_t n = 1000;
  const std::size_t k = min_sketch_dim({0.5, 0.01, 1}, SketchKind::rademacher, n);
  const Matrix v = uniform_matrix(n, 1, 7);
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    failures += !check_embedding(SketchOperator::make(SketchKind::rademacher, k, n, seed), v, 0.5).holds;
  }
  EXPECT_LE(failures, 10);
}

TEST(CheckEmbedding, RademacherFixedSubspaceFailureRateWithinTwiceDelta) {
  const std::size_t n = 2000, d = 2;
  const double delta = 0.05;
  const std::size_t k = min_sketch_dim({0.5, delta, d}, SketchKind::rademacher, n);
  ASSERT_LT(k, n);
  const Matrix V = testing::random_orthonormal(n, d, 8);
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    failures += !check_embedding(SketchOperator::make(SketchKind::rademacher, k, n, seed), V, 0.5).holds;
  }
  EXPECT_LE(failures, static_cast<int>(2 * delta * 200));
}

TEST(CheckEmbedding, SrhtTenDimensionalSubspace) {
  const std::size_t n = 2048;
  const std::size_t k = min_sketch_dim({0.5, 0.01, 10}, SketchKind::srht, n);
  const Matrix V = uniform_matrix(n, 10, 9);
  int holds = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    holds += check_embedding(SketchOperator::make(SketchKind::srht, k, n, seed), V, 0.5).holds;
  }
  EXPECT_GE(holds, 95);
}

TEST(CheckEmbedding, SrhtWellBelowTheBoundStillEmbeds) {
  const std::size_t n = 2048;
  const Matrix V = uniform_matrix(n, 10, 10);
  int holds = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    holds += check_embedding(SketchOperator::make(SketchKind::srht, 400, n, seed), V, 0.5).holds;
  }
  EXPECT_GE(holds, 95);
}

TEST(NormCheck, FrobeniusNormEqualsSqrtN) {
  for (SketchKind kind : {SketchKind::rademacher, SketchKind::srht}) {
    const NormCheck c = operator_norm_bound_check(SketchOperator::make(kind, 64, 256, 3));
    EXPECT_TRUE(c.holds);
    EXPECT_NEAR(c.frobenius, 16.0, 1e-10);
    EXPECT_LE(c.frobenius, std::sqrt(1.5 * 256));
    EXPECT_NEAR(frobenius_norm(SketchOperator::make(kind, 64, 256, 3).materialize()), 16.0, 1e-10);
  }
  const NormCheck id = operator_norm_bound_check(SketchOperator::make(SketchKind::identity, 49, 49, 0));
  EXPECT_NEAR(id.frobenius, 7.0, 1e-15);
}

TEST(Serialization, RoundTrip) {
  for (SketchKind kind : {SketchKind::rademacher, SketchKind::srht, SketchKind::identity}) {
    const std::size_t k = kind == SketchKind::identity ? 300 : 40;
    const SketchOperator a = SketchOperator::make(kind, k, 300, 0xdeadbeefcafeULL);
    const SketchOperator b = SketchOperator::deserialize(a.serialize());
    EXPECT_TRUE(a == b);
    EXPECT_EQ(a.materialize().values(), b.materialize().values());
  }
  EXPECT_EQ(SketchOperator::make(SketchKind::srht, 4, 8, 7).serialize(), "srht 4 8 7");
  EXPECT_THROW(SketchOperator::deserialize("srht 4 8"), ParseError);
  EXPECT_THROW(SketchOperator::deserialize("gauss 4 8 1"), ParseError);
}

TEST(Fwht, MatchesExplicitHadamard) {
  std::vector<double> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = static_cast<double>(i * i) - 3.0;
  std::vector<double> y = x;
  fwht(y.data(), 16);
  for (std::size_t i = 0; i < 16; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 16; ++j) acc += hadamard(i, j) * x[j];
    EXPECT_EQ(y[i], acc);
  }
}

}  // namespace
}  // namespace sketchkrylov
