#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "sketchkrylov/experiment.hpp"
#include "sketchkrylov/generators.hpp"
#include "sketchkrylov/krylov.hpp"
#include "sketchkrylov/matrix_market.hpp"
#include "sketchkrylov/text_format.hpp"

namespace sketchkrylov {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sketchkrylov_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Column `col` of the last CSV row.
double last_value(const std::string& csv, std::size_t col) {
  std::istringstream in(csv);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  std::istringstream fields(last);
  std::string f;
  for (std::size_t i = 0; i <= col; ++i) std::getline(fields, f, ',');
  return parse_double(f);
}

// ---------------------------------------------------------------------------
// Generators

TEST(Synthetic, FirstEntryMatchesExtendedFormula) {
  const std::size_t n = 1000, m = 30;
  const Matrix W = gen_synthetic_51(n, m);
  auto f = [](long double mu, long double x) {
    return std::sin(10.0L * (mu + x)) / (std::cos(100.0L * (mu - x)) + 1.1L);
  };
  const long double w00 = f(1.0L / m, 1.0L / n);
  EXPECT_NEAR(W(0, 0), static_cast<double>(w00), 1e-15 * std::abs(static_cast<double>(w00)) + 1e-300);
  EXPECT_NEAR(W(n - 1, m - 1), static_cast<double>(f(1.0L, 1.0L)), 1e-14);
  EXPECT_NEAR(W(n - 1, m - 1), std::sin(20.0) / 2.1, 1e-14);
  // cos(100 (mu - x)) near -1.1 amplifies argument rounding by ~1e3.
  for (std::size_t i = 0; i < n; i += 97)
    for (std::size_t j = 0; j < m; j += 7) {
      const double ref = static_cast<double>(f((j + 1.0L) / m, (i + 1.0L) / n));
      EXPECT_NEAR(W(i, j), ref, 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Synthetic, DiagonalPointsReduceToSine) {
  // mu = x when (i + 1) / n = (j + 1) / m.
  const Matrix W = gen_synthetic_51(100, 50);
  for (std::size_t j = 0; j < 50; ++j) {
    const double x = (j + 1.0) / 50.0;
    EXPECT_NEAR(W(2 * j + 1, j), std::sin(20 * x) / 2.1, 1e-14);
  }
}

TEST(Synthetic, PrefixConditioningGrows) {
  const Matrix W = gen_synthetic_51(32768, 150);
  const BlockPartition part = BlockPartition::uniform(150, 10);
  std::vector<double> conds;
  for (std::size_t i = 0; i < part.num_blocks(); ++i) {
    conds.push_back(cond_estimate(W.columns(0, part.offset(i) + part.width(i))));
    if (i > 0) EXPECT_GE(conds[i], conds[i - 1] * (1 - 1e-8));
  }
  RecordProperty("cond_half", std::to_string(conds[7]));
  RecordProperty("cond_full", std::to_string(conds.back()));
  EXPECT_GE(conds.back(), 1e7);
  EXPECT_LE(conds.front(), 1e3);
}

TEST(Laplacian, OneDimensionalSpectrum) {
  const Matrix L = gen_laplacian_csr({3}).to_dense();
  const Matrix ref = Matrix::from_rows({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(L(i, j), ref(i, j));
  const std::vector<double> ev = laplacian_eigenvalues({3});
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_NEAR(ev[0], 2 + std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ev[1], 2.0, 1e-15);
  EXPECT_NEAR(ev[2], 2 - std::sqrt(2.0), 1e-15);
  const std::vector<double> sv = singular_values(L);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(sv[i], ev[i], 1e-14);
}

TEST(Laplacian, ConstantVectorOnlyTouchesBoundary) {
  const std::size_t nx = 7, ny = 5;
  const LinearOperator L = gen_laplacian({nx, ny});
  const Matrix y = L.apply(Matrix(nx * ny, 1, std::vector<double>(nx * ny, 1.0)));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const bool boundary = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
      const double expected = (i == 0) + (i + 1 == nx) + (j == 0) + (j + 1 == ny);
      EXPECT_EQ(y(i + nx * j, 0), expected);
      if (!boundary) EXPECT_EQ(y(i + nx * j, 0), 0.0);
    }
}

TEST(Laplacian, LargestEigenvalueRecoveredByRayleighRitz) {
  const std::size_t N = 30;
  const LinearOperator L = gen_laplacian({N, N}, 0.5);
  const double closed = 8 * std::pow(std::sin(M_PI * N / (2.0 * (N + 1))), 2) + 0.5;
  EXPECT_NEAR(laplacian_eigenvalues({N, N}, 0.5).front(), closed, 1e-13);
  RbgsConfig cfg;
  cfg.coarse = cfg.fine = PrecisionSpec::fine();
  const SketchOperator theta = SketchOperator::make(SketchKind::srht, 300, N * N, 1);
  const RitzResult r = rayleigh_ritz(L, gaussian_matrix(N * N, 4, 2), theta, 16, 40, cfg);
  EXPECT_NEAR(r.values[0].real(), closed, 1e-10 * closed);
}

TEST(Laplacian, ShiftedOperatorIsPositiveDefiniteAboveMinusLambdaMin) {
  const std::vector<double> ev = laplacian_eigenvalues({10, 10});
  const Matrix L = gen_laplacian_csr({10, 10}, -0.99 * ev.back()).to_dense();
  EXPECT_NO_THROW(cholesky(L));
  EXPECT_THROW(cholesky(gen_laplacian_csr({10, 10}, -1.01 * ev.back()).to_dense()), NotPositiveDefinite);
}

// ---------------------------------------------------------------------------
// Matrix Market

TEST(MatrixMarket, ArrayFileIsColumnMajor) {
  std::istringstream in("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n3\n2\n4\n");
  const MatrixMarketData d = read_matrix_market(in);
  EXPECT_FALSE(d.coordinate);
  const Matrix A = d.to_dense();
  EXPECT_EQ(A(0, 0), 1.0);
  EXPECT_EQ(A(0, 1), 2.0);
  EXPECT_EQ(A(1, 0), 3.0);
  EXPECT_EQ(A(1, 1), 4.0);
}

TEST(MatrixMarket, SymmetricCoordinateExpandsBothTriangles) {
  std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 2.5\n3 1 -1\n2 2 4\n");
  const MatrixMarketData d = read_matrix_market(in);
  EXPECT_TRUE(d.coordinate);
  EXPECT_TRUE(d.symmetric);
  const Matrix A = d.to_dense();
  EXPECT_EQ(A(2, 0), -1.0);
  EXPECT_EQ(A(0, 2), -1.0);
  EXPECT_EQ(A(0, 0), 2.5);
  EXPECT_EQ(A(1, 1), 4.0);
  EXPECT_EQ(d.sparse.nnz(), 4u);
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"%%MatrixMarket matrix array complex general\n1 1\n1\n", 1},
      {"garbage\n", 1},
      {"%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3},
      {"%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", 4},
      {"%%MatrixMarket matrix array real general\n% c\n2 1\n1.0\nx\n", 5},
  };
  for (const auto& [text, line] : cases) {
    std::istringstream in(text);
    try {
      read_matrix_market(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text << " -> " << e.what();
    }
  }
}

TEST(MatrixMarket, RoundTripIsBitExact) {
  Matrix A = testing::uniform_matrix(17, 9, 3);
  A(0, 0) = 1e-300;
  A(1, 0) = -0.1;
  A(2, 0) = 123456789.123456789;
  A(3, 0) = std::nextafter(1.0, 2.0);
  std::stringstream io;
  write_matrix_market(io, A);
  const Matrix B = read_matrix_market(io).to_dense();
  ASSERT_EQ(B.rows(), 17u);
  ASSERT_EQ(B.cols(), 9u);
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t i = 0; i < 17; ++i) EXPECT_EQ(B(i, j), A(i, j));

  const CsrMatrix C = gen_laplacian_csr({5, 4}, 0.3);
  std::stringstream io2;
  write_matrix_market(io2, C);
  const Matrix D = read_matrix_market(io2).to_dense();
  const Matrix Cd = C.to_dense();
  for (std::size_t j = 0; j < 20; ++j)
    for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(D(i, j), Cd(i, j));
}

// ---------------------------------------------------------------------------
// Config

TEST(Config, RoundTripsThroughText) {
  for (ExperimentKind kind : {ExperimentKind::qr_synthetic, ExperimentKind::gmres, ExperimentKind::eig}) {
    ExperimentConfig c = ExperimentConfig::defaults(kind);
    c.seed = 42;
    c.solver = LsSolver::cg_normal(7);
    c.interblock = "cholqr:2";
    c.tolerance = 1e-9;
    c.certify_gate = true;
    EXPECT_EQ(parse_config_string(serialize_config(c)), c) << serialize_config(c);
  }
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config_string("experiment=qr_synthetic\nbogus=1\n"), ParseError);
  EXPECT_THROW(parse_config_string("experiment=qr_synthetic\nblock=ten\n"), ParseError);
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::qr_synthetic);
  c.block = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ExperimentConfig::defaults(ExperimentKind::qr_synthetic);
  c.sketch_dim = 10;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ExperimentConfig::defaults(ExperimentKind::gmres);
  c.method = ExperimentMethod::subspace;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Config, SeedPrecedence) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::qr_synthetic);
  ::unsetenv(kSeedEnvVar);
  EXPECT_EQ(c.resolved_seed(), kDefaultSeed);
  ::setenv(kSeedEnvVar, "77", 1);
  EXPECT_EQ(c.resolved_seed(), 77u);
  c.seed = 5;
  EXPECT_EQ(c.resolved_seed(), 5u);
  ::unsetenv(kSeedEnvVar);
}

// ---------------------------------------------------------------------------
// Experiments at desk scale

ExperimentConfig no_files(ExperimentKind kind) {
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  c.out.clear();
  return c;
}

TEST(Experiment, CsvSchema) {
  ExperimentConfig c = no_files(ExperimentKind::qr_synthetic);
  c.n = 2048;
  c.m = 40;
  c.sketch_dim = 400;
  const ExperimentOutcome o = run_experiment(c);
  ASSERT_EQ(o.exit_code, kExitOk) << o.error;
  EXPECT_EQ(o.csv.substr(0, o.csv.find('\n')), "iter,cond_Q,rel_fact_error,delta,delta_tilde");
  EXPECT_EQ(std::count(o.csv.begin(), o.csv.end(), '\n'), 5);
  EXPECT_NE(o.summary.find("status=ok"), std::string::npos);
}

TEST(Experiment, SyntheticQrMultiPrecisionCertifies) {
  const ExperimentOutcome o = run_experiment(no_files(ExperimentKind::qr_synthetic));
  ASSERT_EQ(o.exit_code, kExitOk) << o.error;
  const double cond = last_value(o.csv, 1), delta = last_value(o.csv, 3);
  RecordProperty("final_cond_Q", format_double(cond));
  RecordProperty("final_delta", format_double(delta));
  EXPECT_LE(cond, 2.0);
  EXPECT_LE(delta, 0.1);
}

TEST(Experiment, GmresBcgsStagnatesWhileRbgsConverges) {
  ExperimentConfig rb = no_files(ExperimentKind::gmres);
  ExperimentConfig bc = rb;
  bc.method = ExperimentMethod::bcgs;
  const ExperimentOutcome a = run_experiment(rb), b = run_experiment(bc);
  ASSERT_EQ(a.exit_code, kExitOk) << a.error;
  ASSERT_EQ(b.exit_code, kExitOk) << b.error;
  const double ra = last_value(a.csv, 2), rbc = last_value(b.csv, 2);
  RecordProperty("rbgs_residual", format_double(ra));
  RecordProperty("bcgs_residual", format_double(rbc));
  EXPECT_LE(ra, 1e-8);
  EXPECT_GE(rbc, 1e-2);
}

TEST(Experiment, EigRbgsBeatsSubspaceIteration) {
  ExperimentConfig rr = no_files(ExperimentKind::eig);
  ExperimentConfig si = rr;
  si.method = ExperimentMethod::subspace;
  const ExperimentOutcome a = run_experiment(rr), b = run_experiment(si);
  ASSERT_EQ(a.exit_code, kExitOk) << a.error;
  ASSERT_EQ(b.exit_code, kExitOk) << b.error;
  EXPECT_LE(last_value(a.csv, 2), 1e-10);
  EXPECT_GE(last_value(b.csv, 2), 1e-4);
  // Same number of rows, one per restart cycle's worth of products.
  EXPECT_EQ(std::count(a.csv.begin(), a.csv.end(), '\n'), std::count(b.csv.begin(), b.csv.end(), '\n'));
}

TEST(Experiment, GateReportsCertificationFailure) {
  ExperimentConfig c = no_files(ExperimentKind::qr_synthetic);
  c.n = 2048;
  c.m = 40;
  c.sketch_dim = 400;
  c.certify_gate = true;
  EXPECT_EQ(run_experiment(c).exit_code, kExitOk);
  c.precision = PrecisionMode::unique_coarse;
  c.n = 32768;
  c.m = 150;
  c.sketch_dim = 1500;
  const ExperimentOutcome o = run_experiment(c);
  EXPECT_EQ(o.exit_code, kExitCertification);
  EXPECT_NE(o.summary.find("status=certification_failed"), std::string::npos);
}

TEST(Experiment, HardErrorsCarryContext) {
  ExperimentConfig c = no_files(ExperimentKind::custom_qr);
  c.matrix = "/nonexistent/file.mtx";
  const ExperimentOutcome o = run_experiment(c);
  EXPECT_EQ(o.exit_code, kExitError);
  EXPECT_EQ(o.error.rfind("custom_qr experiment failed: ", 0), 0u) << o.error;
}

TEST(Experiment, RerunsAreByteIdentical) {
  for (ExperimentKind kind : {ExperimentKind::qr_synthetic, ExperimentKind::gmres, ExperimentKind::eig}) {
    ExperimentConfig c = no_files(kind);
    if (kind == ExperimentKind::qr_synthetic) {
      c.n = 4096;
      c.m = 60;
      c.sketch_dim = 600;
    } else {
      c.grid = {32, 32};
      c.sketch_dim = 400;
      c.cycles = 2;
    }
    c.seed = 9;
    const ExperimentOutcome a = run_experiment(c), b = run_experiment(c);
    ASSERT_EQ(a.exit_code, kExitOk) << a.error;
    EXPECT_EQ(a.csv, b.csv) << to_string(kind);
    c.seed = 10;
    if (kind != ExperimentKind::qr_synthetic || c.sketch != SketchKind::identity)
      EXPECT_NE(run_experiment(c).csv, a.csv) << to_string(kind);
  }
}

// ---------------------------------------------------------------------------
// Command line

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SKETCHKRYLOV_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesAndArtifacts) {
  const fs::path dir = scratch_dir("cli");
  const std::string out = (dir / "qr").string();
  EXPECT_EQ(run_cli("qr --n 2048 --m 40 --sketch srht:400:3 --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir / "qr" / "results.csv"));
  EXPECT_TRUE(fs::exists(dir / "qr" / "summary.txt"));
  EXPECT_TRUE(fs::exists(dir / "qr" / "config.txt"));

  // The written config reproduces the run.
  const std::string again = (dir / "again").string();
  EXPECT_EQ(run_cli("qr --config " + (dir / "qr" / "config.txt").string() + " --out " + again), 0);
  EXPECT_EQ(read_file(dir / "qr" / "results.csv"), read_file(dir / "again" / "results.csv"));

  EXPECT_EQ(run_cli("qr --block 0 --out ''"), 1);
  EXPECT_EQ(run_cli("qr --sketch bogus:10 --out ''"), 1);
  EXPECT_EQ(run_cli("nosuchcommand"), 1);
  EXPECT_EQ(run_cli("qr --precision f32 --gate --out ''"), 2);
}

TEST(Cli, GenAndCertify) {
  const fs::path dir = scratch_dir("gen");
  const std::string well = (dir / "well.mtx").string(), bad = (dir / "bad.mtx").string();
  ASSERT_EQ(run_cli("gen conditioned --n 2000 --m 40 --cond 1e3 --seed 4 -o " + well), 0);
  const Matrix W = load_matrix_market(well).to_dense();
  EXPECT_EQ(W.rows(), 2000u);
  EXPECT_NEAR(cond_estimate(W), 1e3, 1e-6 * 1e3);
  EXPECT_EQ(run_cli("certify --matrix " + well + " --sketch srht:400 --block 10 --out ''"), 0);

  ASSERT_EQ(run_cli("gen synthetic --n 32768 --m 150 -o " + bad), 0);
  EXPECT_EQ(run_cli("certify --matrix " + bad + " --sketch srht:1500 --block 10 --precision f32 --out ''"), 2);
  EXPECT_EQ(run_cli("certify --out ''"), 1);

  const std::string lap = (dir / "lap.mtx").string();
  ASSERT_EQ(run_cli("gen laplacian --grid 6x6 --shift 1 -o " + lap), 0);
  const Matrix L = load_matrix_market(lap).to_dense();
  const Matrix ref = gen_laplacian_csr({6, 6}, 1.0).to_dense();
  for (std::size_t j = 0; j < 36; ++j)
    for (std::size_t i = 0; i < 36; ++i) EXPECT_EQ(L(i, j), ref(i, j));
}

}  // namespace
}  // namespace sketchkrylov
