#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sketchkrylov/classic_bgs.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/experiment.hpp"
#include "sketchkrylov/generators.hpp"
#include "sketchkrylov/krylov.hpp"
#include "sketchkrylov/matrix_market.hpp"
#include "sketchkrylov/text_format.hpp"

namespace sketchkrylov {
namespace {

constexpr double kCertLimit = 0.1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Row {
  std::size_t iter;
  double cond_q;
  double value;
  double delta;
  double delta_tilde;
};

struct Run {
  std::string value_column;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> summary;
};

BgsVariant variant_of(ExperimentMethod m) {
  switch (m) {
    case ExperimentMethod::bcgs: return BgsVariant::bcgs;
    case ExperimentMethod::bmgs: return BgsVariant::bmgs;
    default: return BgsVariant::bcgs2;
  }
}

PrecisionSpec classic_precision(PrecisionMode p) {
  return p == PrecisionMode::unique_coarse ? PrecisionSpec::coarse() : PrecisionSpec::fine();
}

RbgsConfig rbgs_config(const ExperimentConfig& cfg, BlockPartition partition) {
  RbgsConfig rc;
  rc.partition = std::move(partition);
  rc.ls_solver = cfg.solver;
  rc.interblock = cfg.interblock.empty() ? InterblockMethod::l2_cholqr() : parse_interblock(cfg.interblock);
  switch (cfg.precision) {
    case PrecisionMode::multi:
      rc.coarse = PrecisionSpec::coarse();
      rc.fine = PrecisionSpec::fine();
      break;
    case PrecisionMode::unique_coarse:
      rc.coarse = rc.fine = PrecisionSpec::coarse();
      break;
    case PrecisionMode::unique_fine:
      rc.coarse = rc.fine = PrecisionSpec::fine();
      break;
  }
  return rc;
}

ClassicInterblock classic_interblock_of(const ExperimentConfig& cfg) {
  return cfg.interblock.empty() ? ClassicInterblock::householder : parse_classic_interblock(cfg.interblock);
}

SketchOperator make_sketch(const ExperimentConfig& cfg, std::size_t n) {
  return SketchOperator::make(cfg.sketch, cfg.sketch_dim, n, cfg.resolved_seed());
}

LinearOperator build_operator(const ExperimentConfig& cfg) {
  LinearOperator base = cfg.matrix.empty() ? gen_laplacian(cfg.grid)
                                           : LinearOperator::sparse(load_matrix_market(cfg.matrix).to_sparse());
  if (cfg.negate) return LinearOperator::shifted(std::move(base), cfg.shift, -1);
  if (cfg.shift != 0.0) return LinearOperator::shifted(std::move(base), cfg.shift, +1);
  return base;
}

Run run_qr(const ExperimentConfig& cfg) {
  Matrix W;
  if (cfg.experiment == ExperimentKind::qr_synthetic) {
    W = gen_synthetic_51(cfg.n, cfg.m);
  } else {
    W = load_matrix_market(cfg.matrix).to_dense();
  }
  const BlockPartition partition = BlockPartition::uniform(W.cols(), cfg.block);
  BlockQR qr;
  if (cfg.method == ExperimentMethod::rbgs) {
    qr = rbgs(W, make_sketch(cfg, W.rows()), rbgs_config(cfg, partition));
  } else {
    ClassicBgsConfig cc;
    cc.variant = variant_of(cfg.method);
    cc.partition = partition;
    cc.precision = classic_precision(cfg.precision);
    cc.interblock = classic_interblock_of(cfg);
    qr = classic_bgs(W, cc);
  }
  const std::vector<double> conds = prefix_condition_numbers(qr.Q, partition);
  const std::vector<double> errs = prefix_factorization_errors(W, qr.Q, qr.R, partition);
  Run run;
  run.value_column = "rel_fact_error";
  for (std::size_t i = 0; i < partition.num_blocks(); ++i) {
    Row row{i + 1, conds[i], errs[i], kNaN, kNaN};
    if (!qr.S.empty()) {
      const std::size_t c = partition.offset(i) + partition.width(i);
      const CertReport cert = certify(qr.S.columns(0, c), qr.P.columns(0, c), qr.R.view(0, 0, c, c));
      row.delta = cert.delta;
      row.delta_tilde = cert.delta_tilde;
    }
    run.rows.push_back(row);
  }
  run.summary.emplace_back("rows", std::to_string(W.rows()));
  run.summary.emplace_back("cols", std::to_string(W.cols()));
  run.summary.emplace_back("cond_W", format_double(cond_estimate(W)));
  return run;
}

Run run_gmres(const ExperimentConfig& cfg) {
  const LinearOperator A = build_operator(cfg);
  const Matrix B = gaussian_matrix(A.dim(), cfg.block, cfg.resolved_seed(), 7);
  KrylovOptions opts;
  opts.matvec = cfg.matvec;
  opts.tolerance = cfg.tolerance;
  const std::size_t p = cfg.restart + 1;
  KrylovSolveReport rep;
  if (cfg.method == ExperimentMethod::rbgs) {
    rep = block_gmres(A, B, make_sketch(cfg, A.dim()), p, cfg.cycles, rbgs_config(cfg, {}), opts);
  } else {
    rep = gmres_with(A, B, p, cfg.cycles,
                     classic_factory(variant_of(cfg.method), classic_precision(cfg.precision), classic_interblock_of(cfg)),
                     opts);
  }
  Run run;
  run.value_column = "rel_residual";
  for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
    run.rows.push_back({rep.residual_history[i].iteration, rep.basis_cond_history[i], rep.residual_history[i].residual,
                        rep.delta_history[i], rep.delta_tilde_history[i]});
  }
  run.summary.emplace_back("dimension", std::to_string(A.dim()));
  run.summary.emplace_back("cycles", std::to_string(rep.restarts));
  run.summary.emplace_back("breakdown", rep.breakdown ? "true" : "false");
  return run;
}

Run run_eig(const ExperimentConfig& cfg) {
  const LinearOperator A = build_operator(cfg);
  const Matrix B = gaussian_matrix(A.dim(), cfg.block, cfg.resolved_seed(), 8);
  RitzOptions opts;
  opts.matvec = cfg.matvec;
  RitzResult res;
  Run run;
  run.value_column = "max_eig_residual";
  if (cfg.method == ExperimentMethod::subspace) {
    // Same number of operator applications per row as one restart cycle.
    res = subspace_iteration(A, B, cfg.cycles * cfg.restart, opts);
    for (const RitzIteration& it : res.history) {
      if (it.iteration % cfg.restart != 0) continue;
      run.rows.push_back({it.iteration / cfg.restart, it.cond_q, it.max_residual, it.delta, it.delta_tilde});
    }
  } else {
    const std::size_t p = cfg.restart + 1;
    const OrthogonalizerFactory factory =
        cfg.method == ExperimentMethod::rbgs
            ? rbgs_factory(make_sketch(cfg, A.dim()), rbgs_config(cfg, {}))
            : classic_factory(variant_of(cfg.method), classic_precision(cfg.precision), classic_interblock_of(cfg));
    res = rayleigh_ritz_with(A, B, p, cfg.cycles, factory, false, opts);
    for (const RitzIteration& it : res.history) {
      run.rows.push_back({it.iteration, it.cond_q, it.max_residual, it.delta, it.delta_tilde});
    }
  }
  run.summary.emplace_back("dimension", std::to_string(A.dim()));
  std::string values;
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    if (i) values += ' ';
    values += format_double(res.values[i].real());
    if (res.values[i].imag() != 0.0) values += (res.values[i].imag() > 0 ? "+" : "") + format_double(res.values[i].imag()) + "i";
  }
  run.summary.emplace_back("ritz_values", values);
  return run;
}

std::string to_csv(const Run& run) {
  std::ostringstream out;
  out << "iter,cond_Q," << run.value_column << ",delta,delta_tilde\n";
  for (const Row& r : run.rows) {
    out << r.iter << ',' << format_double(r.cond_q) << ',' << format_double(r.value) << ',' << format_double(r.delta)
        << ',' << format_double(r.delta_tilde) << '\n';
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome outcome;
  std::ostringstream summary;
  try {
    cfg.validate();
    ExperimentConfig resolved = cfg;
    resolved.seed = cfg.resolved_seed();
    summary << "experiment=" << to_string(cfg.experiment) << '\n'
            << "method=" << to_string(cfg.method) << '\n'
            << "precision=" << to_string(cfg.precision) << '\n'
            << "seed=" << *resolved.seed << '\n';

    Run run;
    switch (cfg.experiment) {
      case ExperimentKind::qr_synthetic:
      case ExperimentKind::custom_qr: run = run_qr(resolved); break;
      case ExperimentKind::gmres: run = run_gmres(resolved); break;
      case ExperimentKind::eig: run = run_eig(resolved); break;
    }
    for (const auto& [k, v] : run.summary) summary << k << '=' << v << '\n';
    outcome.csv = to_csv(run);

    outcome.exit_code = kExitOk;
    if (!run.rows.empty()) {
      const Row& last = run.rows.back();
      summary << "iterations=" << last.iter << '\n'
              << "final_cond_Q=" << format_double(last.cond_q) << '\n'
              << "final_" << run.value_column << '=' << format_double(last.value) << '\n'
              << "final_delta=" << format_double(last.delta) << '\n'
              << "final_delta_tilde=" << format_double(last.delta_tilde) << '\n';
      if (cfg.certify_gate && (last.delta > kCertLimit || last.delta_tilde > kCertLimit)) {
        outcome.exit_code = kExitCertification;
      }
    }
    summary << "status=" << (outcome.exit_code == kExitOk ? "ok" : "certification_failed") << '\n';
    outcome.summary = summary.str();

    if (!cfg.out.empty()) {
      const std::filesystem::path dir(cfg.out);
      std::filesystem::create_directories(dir);
      write_file(dir / "results.csv", outcome.csv);
      write_file(dir / "summary.txt", outcome.summary);
      write_file(dir / "config.txt", serialize_config(resolved));
    }
  } catch (const std::exception& e) {
    outcome.exit_code = kExitError;
    outcome.error = to_string(cfg.experiment) + " experiment failed: " + e.what();
    summary << "status=error\nerror=" << outcome.error << '\n';
    outcome.summary = summary.str();
  }
  return outcome;
}

}  // namespace sketchkrylov
