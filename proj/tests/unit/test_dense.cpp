#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracle.hpp"

namespace sketchkrylov {
namespace {

using testing::long_product;
using testing::to_long;
using testing::uniform_matrix;

constexpr double u_fine = 0x1p-53;
constexpr double u_crs = 0x1p-24;

Matrix round_to_float(Matrix A) {
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i) A(i, j) = static_cast<float>(A(i, j));
  return A;
}

TEST(Philox, KnownAnswers) {
  const PhiloxCounter zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(zero, (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  const PhiloxCounter ones =
      philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(ones, (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  PhiloxStream a(7, 0), b(7, 0), c(7, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u32();
    EXPECT_EQ(x, b.next_u32());
    (void)c;
  }
  PhiloxStream d(7, 0), e(7, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += d.next_u32() == e.next_u32();
  EXPECT_LT(same, 2);
}

TEST(Philox, UniformAndBoundedRanges) {
  PhiloxStream s(3, 2);
  for (int i = 0; i < 10000; ++i) {
    const double x = s.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
    ASSERT_LT(s.bounded(17), 17u);
  }
}

TEST(Gemm, IdentityTimesIdentity) {
  const Matrix I = Matrix::identity(3);
  const Matrix C = gemm(1.0, I, I, 0.0, MatrixView{});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(C(i, j), i == j ? 1.0 : 0.0);
}

TEST(Gemm, SmallCoarseProductIsExact) {
  const Matrix A = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix B = Matrix::from_rows({{5}, {6}});
  const Matrix C = multiply(A, B, PrecisionSpec::coarse());
  EXPECT_EQ(C(0, 0), 17.0);
  EXPECT_EQ(C(1, 0), 39.0);
  EXPECT_TRUE(C.precision().is_coarse());
}

TEST(Gemm, CoarseErrorWithinComponentwiseBound) {
  const Matrix A = round_to_float(uniform_matrix(64, 64, 1));
  const Matrix B = round_to_float(uniform_matrix(64, 64, 2));
  const Matrix C = multiply(A, B, PrecisionSpec::coarse());
  const testing::LMatrix exact = long_product(A, B);
  const testing::LMatrix absprod = to_long(A).cwiseAbs() * to_long(B).cwiseAbs();
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) {
      const long double err = std::abs(static_cast<long double>(C(i, j)) - exact(i, j));
      ASSERT_LE(err, 1.02L * 64 * u_crs * absprod(i, j)) << i << "," << j;
    }
}

TEST(Gemm, CoarseMatchesPlainFloatLoop) {
  const Matrix A = uniform_matrix(17, 9, 3);
  const Matrix B = uniform_matrix(9, 5, 4);
  const Matrix C = multiply(A, B, PrecisionSpec::coarse());
  for (std::size_t i = 0; i < 17; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      float acc = 0.0f;
      for (std::size_t l = 0; l < 9; ++l) {
        const float prod = static_cast<float>(A(i, l)) * static_cast<float>(B(l, j));
        acc = acc + prod;
      }
      EXPECT_EQ(C(i, j), static_cast<double>(acc));
    }
}

TEST(Gemm, FineMatchesExtendedOracle) {
  const Matrix A = uniform_matrix(40, 30, 5);
  const Matrix B = uniform_matrix(30, 20, 6);
  const Matrix C0 = uniform_matrix(40, 20, 7);
  const Matrix C = gemm(2.0, A, B, -0.5, C0);
  const testing::LMatrix ref = 2.0L * long_product(A, B) - 0.5L * to_long(C0);
  const testing::LMatrix absref = 2.0L * (to_long(A).cwiseAbs() * to_long(B).cwiseAbs()) + 0.5L * to_long(C0).cwiseAbs();
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      EXPECT_LE(std::abs(C(i, j) - ref(i, j)), 1.02L * 32 * u_fine * absref(i, j));
}

TEST(Gemm, TransposeFlags) {
  const Matrix A = uniform_matrix(6, 4, 8);
  const Matrix B = uniform_matrix(6, 3, 9);
  const Matrix C = multiply(A, B, PrecisionSpec::fine(), Trans::yes);
  const testing::LMatrix ref = to_long(A).transpose() * to_long(B);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(C(i, j), static_cast<double>(ref(i, j)), 1e-14);
  const Matrix D = multiply(B, A, PrecisionSpec::fine(), Trans::yes, Trans::no);
  EXPECT_EQ(D.rows(), 3u);
  EXPECT_THROW(multiply(A, A), DimensionError);
}

TEST(Gemm, SubtractProduct) {
  const Matrix A = uniform_matrix(10, 4, 10);
  const Matrix X = uniform_matrix(4, 3, 11);
  const Matrix C = uniform_matrix(10, 3, 12);
  const Matrix D = subtract_product(C, A, X);
  const testing::LMatrix ref = to_long(C) - long_product(A, X);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(D(i, j), static_cast<double>(ref(i, j)), 1e-14);
}

TEST(HouseholderQr, OrthonormalInputGivesIdentityR) {
  const Matrix A = testing::random_orthonormal(30, 5, 1);
  const QrFactors f = householder_qr(A);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(f.R(i, j), i == j ? 1.0 : 0.0, 1e-14);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(f.Q(i, j), A(i, j), 1e-14);
}

TEST(HouseholderQr, ThreeFourFive) {
  const QrFactors f = householder_qr(Matrix::from_rows({{3}, {4}}));
  EXPECT_NEAR(f.R(0, 0), 5.0, 1e-15);
  EXPECT_NEAR(f.Q(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(f.Q(1, 0), 0.8, 1e-15);
}

TEST(HouseholderQr, RandomResiduals) {
  const Matrix A = uniform_matrix(50, 20, 13);
  const QrFactors f = householder_qr(A);
  const double fact = frobenius_norm(subtract(A, multiply(f.Q, f.R))) / frobenius_norm(A);
  EXPECT_LE(fact, 10 * u_fine * std::sqrt(20.0));
  EXPECT_LE(orthogonality_loss(f.Q), 10 * u_fine * 20);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_GE(f.R(j, j), 0.0);
    for (std::size_t i = j + 1; i < 20; ++i) EXPECT_EQ(f.R(i, j), 0.0);
  }
}

TEST(HouseholderQr, RejectsWideInput) { EXPECT_THROW(householder_qr(uniform_matrix(3, 5, 1)), DimensionError); }

TEST(Cholesky, Identity) {
  const Matrix R = cholesky(Matrix::identity(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(R(i, j), i == j ? 1.0 : 0.0);
}

TEST(Cholesky, TwoByTwo) {
  const Matrix G = Matrix::from_rows({{4, 2}, {2, 3}});
  const Matrix R = cholesky(G);
  EXPECT_NEAR(R(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(R(0, 1), 1.0, 1e-15);
  EXPECT_EQ(R(1, 0), 0.0);
  EXPECT_NEAR(R(1, 1), std::sqrt(2.0), 1e-15);
  const Matrix RtR = multiply(R, R, PrecisionSpec::fine(), Trans::yes);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(RtR(i, j), G(i, j), 1e-14);
}

TEST(Cholesky, IndefiniteReportsColumnTwo) {
  try {
    cholesky(Matrix::from_rows({{1, 2}, {2, 1}}));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos);
  }
}

TEST(TriangularSolve, IdentityReturnsRightHandSide) {
  const Matrix B = uniform_matrix(3, 2, 1);
  const Matrix X = triangular_solve(Matrix::identity(3), B, Side::left);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(X(i, j), B(i, j));
}

TEST(TriangularSolve, LeftAndRight) {
  const Matrix R = Matrix::from_rows({{2, 1}, {0, 2}});
  const Matrix X = triangular_solve(R, Matrix::from_rows({{4}, {2}}), Side::left);
  EXPECT_DOUBLE_EQ(X(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(X(1, 0), 1.0);
  const Matrix B = uniform_matrix(5, 2, 2);
  const Matrix Y = triangular_solve(R, B, Side::right);
  const Matrix back = multiply(Y, R);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(back(i, j), B(i, j), 1e-15);
}

TEST(TriangularSolve, IllConditionedStaysFinite) {
  const Matrix R = Matrix::from_rows({{1, 0}, {0, 1e-30}});
  const Matrix X = triangular_solve(R, Matrix::from_rows({{1}, {1}}), Side::left);
  EXPECT_TRUE(X.all_finite());
  EXPECT_THROW(triangular_solve(Matrix::from_rows({{1, 0}, {0, 0}}), Matrix::from_rows({{1}, {1}}), Side::left),
               SingularMatrix);
}

TEST(LeastSquares, MatchesExtendedNormalEquations) {
  const Matrix A = uniform_matrix(60, 12, 3);
  const Matrix B = uniform_matrix(60, 2, 4);
  const Matrix X = least_squares(A, B);
  const testing::LMatrix Al = to_long(A);
  const testing::LMatrix ref = (Al.transpose() * Al).ldlt().solve(Al.transpose() * to_long(B));
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(X(i, j), static_cast<double>(ref(i, j)), 1e-12);
}

TEST(HessenbergEig, Triangular) {
  const EigenDecomposition e = hessenberg_eig(Matrix::from_rows({{2, 1}, {0, 3}}));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0].real(), 3.0, 1e-14);
  EXPECT_NEAR(e.values[1].real(), 2.0, 1e-14);
  EXPECT_EQ(e.values[0].imag(), 0.0);
}

TEST(HessenbergEig, Diagonal) {
  const EigenDecomposition e = hessenberg_eig(Matrix::from_rows({{5, 0}, {0, 1}}));
  EXPECT_NEAR(e.values[0].real(), 5.0, 1e-14);
  EXPECT_NEAR(e.values[1].real(), 1.0, 1e-14);
}

TEST(HessenbergEig, RandomMatchesCharacteristicPolynomialRoots) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Matrix H = uniform_matrix(8, 8, seed);
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t i = j + 2; i < 8; ++i) H(i, j) = 0.0;
    const EigenDecomposition e = hessenberg_eig(H);
    const auto roots = testing::charpoly_roots(H);
    ASSERT_EQ(e.values.size(), 8u);
    for (const auto& v : e.values) {
      long double best = std::numeric_limits<long double>::infinity();
      for (const auto& r : roots) best = std::min(best, std::abs(std::complex<long double>(v.real(), v.imag()) - r));
      EXPECT_LE(best, 1e-8L * std::max<long double>(1.0L, std::abs(v))) << "seed " << seed;
    }
    // Eigenvectors: H v = lambda v.
    for (std::size_t j = 0; j < 8; ++j) {
      const auto lam = e.values[j];
      std::vector<std::complex<double>> v(8);
      if (lam.imag() == 0.0) {
        for (std::size_t i = 0; i < 8; ++i) v[i] = e.vectors(i, j);
      } else if (lam.imag() > 0.0) {
        for (std::size_t i = 0; i < 8; ++i) v[i] = {e.vectors(i, j), e.vectors(i, j + 1)};
      } else {
        for (std::size_t i = 0; i < 8; ++i) v[i] = {e.vectors(i, j - 1), -e.vectors(i, j)};
      }
      double res = 0.0;
      for (std::size_t i = 0; i < 8; ++i) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < 8; ++k) acc += H(i, k) * v[k];
        res += std::norm(acc - lam * v[i]);
      }
      EXPECT_LE(std::sqrt(res), 1e-10) << "seed " << seed << " pair " << j;
    }
  }
}

TEST(Eig, GeneralMatrixMatchesEigenOracle) {
  const Matrix A = uniform_matrix(12, 12, 21);
  const EigenDecomposition e = eig(A);
  Eigen::EigenSolver<Eigen::MatrixXd> ref(testing::to_eigen(A));
  for (const auto& v : e.values) {
    double best = 1e300;
    for (Eigen::Index i = 0; i < ref.eigenvalues().size(); ++i) best = std::min(best, std::abs(v - ref.eigenvalues()(i)));
    EXPECT_LE(best, 1e-10);
  }
  for (std::size_t j = 1; j < e.values.size(); ++j) EXPECT_GE(std::abs(e.values[j - 1]) + 1e-12, std::abs(e.values[j]));
}

TEST(ConditionNumber, OrthonormalIsOne) {
  EXPECT_NEAR(cond_estimate(testing::random_orthonormal(40, 8, 2)), 1.0, 1e-10);
}

TEST(ConditionNumber, Diagonal) {
  EXPECT_NEAR(cond_estimate(Matrix::from_rows({{10, 0}, {0, 1}})), 10.0, 1e-12);
  EXPECT_TRUE(std::isinf(cond_estimate(Matrix::from_rows({{1, 1}, {1, 1}}))));
}

TEST(SingularValues, MatchGramEigenvaluesInExtendedPrecision) {
  const Matrix A = uniform_matrix(30, 10, 17);
  const std::vector<double> s = singular_values(A);
  const testing::LMatrix Al = to_long(A);
  Eigen::SelfAdjointEigenSolver<testing::LMatrix> es(Al.transpose() * Al);
  ASSERT_EQ(s.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    const long double ref = std::sqrt(es.eigenvalues()(9 - i));
    EXPECT_LE(std::abs(s[i] - ref) / ref, 1e-8L);
  }
  const double c = cond_estimate(A);
  EXPECT_LE(std::abs(c - s.front() / s.back()) / c, 1e-12);
}

TEST(PrefixDiagnostics, ConditionAndFactorizationError) {
  const Matrix W = random_with_condition(200, 12, 1e6, 3);
  const BlockPartition part = BlockPartition::uniform(12, 4);
  const QrFactors f = householder_qr(W);
  const std::vector<double> conds = prefix_condition_numbers(W, part);
  ASSERT_EQ(conds.size(), 3u);
  for (std::size_t b = 0; b < 3; ++b) {
    const std::size_t c = part.offset(b) + part.width(b);
    EXPECT_NEAR(conds[b] / cond_estimate(W.columns(0, c)), 1.0, 1e-6);
  }
  const std::vector<double> errs = prefix_factorization_errors(W, f.Q, f.R, part);
  for (double e : errs) EXPECT_LE(e, 1e-14);
}

TEST(Matrix, ConstructionChecks) {
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_THROW(Matrix(1, 1, std::vector<double>{std::nan("")}), InvalidArgument);
  const Matrix A = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(A(1, 2), 6.0);
  EXPECT_EQ(A.transpose()(2, 1), 6.0);
  EXPECT_EQ(A.block(0, 1, 2, 2)(1, 0), 5.0);
}

TEST(BlockPartition, UniformWithTrailingBlock) {
  const BlockPartition p = BlockPartition::uniform(23, 10);
  EXPECT_EQ(p.num_blocks(), 3u);
  EXPECT_EQ(p.width(2), 3u);
  EXPECT_EQ(p.offset(2), 20u);
  EXPECT_EQ(p.block_of(19), 1u);
  EXPECT_EQ(p.total_cols(), 23u);
}

}  // namespace
}  // namespace sketchkrylov
