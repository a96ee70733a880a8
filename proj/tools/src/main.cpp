#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sketchkrylov/error.hpp"
#include "sketchkrylov/experiment.hpp"
#include "sketchkrylov/generators.hpp"
#include "sketchkrylov/matrix_market.hpp"
#include "sketchkrylov/text_format.hpp"

namespace sk = sketchkrylov;

namespace {

// Flags shared by the experiment subcommands, kept as raw strings so they are
// applied through the same path as config file keys.
struct RunFlags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::string> extra;  // --set key=value
  bool gate = false;
};

void add_value(CLI::App* cmd, RunFlags& flags, const std::string& name, const std::string& key,
               const std::string& help) {
  cmd->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_run_flags(CLI::App* cmd, RunFlags& flags, sk::ExperimentKind kind) {
  cmd->add_option("--config", flags.config, "key=value config file");
  add_value(cmd, flags, "--method", "method", "bcgs, bmgs, bcgs2, rbgs (eig also: subspace)");
  add_value(cmd, flags, "--sketch", "sketch", "kind:k[:seed] with kind rademacher, srht or identity");
  add_value(cmd, flags, "--seed", "seed", "random seed (default: $SKETCH_KRYLOV_SEED, then 1)");
  add_value(cmd, flags, "--block", "block", "block width m_p");
  add_value(cmd, flags, "--precision", "precision", "f32, f64 or multi");
  add_value(cmd, flags, "--solver", "solver", "richardson:L, bmgs:L, cg:L or householder");
  add_value(cmd, flags, "--interblock", "interblock", "rgs, cholqr:L, l2_cholqr; classic: householder, cgs2, cholqr");
  add_value(cmd, flags, "--matrix", "matrix", "Matrix Market input");
  add_value(cmd, flags, "--out", "out", "output directory (empty: no files)");
  if (kind == sk::ExperimentKind::qr_synthetic) {
    add_value(cmd, flags, "--n", "n", "rows of the synthetic matrix");
    add_value(cmd, flags, "--m", "m", "columns of the synthetic matrix");
  } else {
    add_value(cmd, flags, "--restart", "restart", "Krylov iterations per cycle");
    add_value(cmd, flags, "--cycles", "cycles", "number of restart cycles");
    add_value(cmd, flags, "--grid", "grid", "Laplacian grid, e.g. 100x100");
    add_value(cmd, flags, "--shift", "shift", "diagonal shift");
    add_value(cmd, flags, "--matvec", "matvec", "precision of operator products, f32 or f64");
    if (kind == sk::ExperimentKind::gmres) add_value(cmd, flags, "--tolerance", "tolerance", "stopping tolerance");
    if (kind == sk::ExperimentKind::eig) add_value(cmd, flags, "--negate", "negate", "use shift*I - A");
  }
  cmd->add_option("--set", flags.extra, "extra key=value settings")->take_all();
  cmd->add_flag("--gate", flags.gate, "exit with code 2 when delta or delta_tilde exceeds 0.1");
}

sk::ExperimentConfig build_config(sk::ExperimentKind kind, const RunFlags& flags) {
  sk::ExperimentConfig cfg = sk::ExperimentConfig::defaults(kind);
  if (!flags.config.empty()) {
    cfg = sk::load_config(flags.config);
    const bool qr_pair = (kind == sk::ExperimentKind::qr_synthetic && cfg.experiment == sk::ExperimentKind::custom_qr);
    if (cfg.experiment != kind && !qr_pair) {
      throw sk::InvalidArgument("config file is for experiment '" + sk::to_string(cfg.experiment) + "'");
    }
  }
  for (const auto& [key, value] : flags.values) sk::set_config_value(cfg, key, value);
  for (const std::string& kv : flags.extra) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sk::InvalidArgument("--set expects key=value, got '" + kv + "'");
    sk::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (kind == sk::ExperimentKind::qr_synthetic && !cfg.matrix.empty()) cfg.experiment = sk::ExperimentKind::custom_qr;
  if (flags.gate) cfg.certify_gate = true;
  return cfg;
}

int report(const sk::ExperimentOutcome& outcome) {
  std::cout << outcome.summary;
  if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << '\n';
  return outcome.exit_code;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::size_t start = 0;
  while (true) {
    const auto x = text.find('x', start);
    grid.push_back(sk::parse_count(text.substr(start, x - start)));
    if (x == std::string::npos) break;
    start = x + 1;
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized block Gram-Schmidt experiments"};
  app.require_subcommand(1);

  RunFlags qr_flags, gmres_flags, eig_flags, cert_flags;
  CLI::App* qr = app.add_subcommand("qr", "block QR of the synthetic matrix or a Matrix Market file");
  add_run_flags(qr, qr_flags, sk::ExperimentKind::qr_synthetic);
  CLI::App* gmres = app.add_subcommand("gmres", "restarted block GMRES on a shifted Laplacian or a file");
  add_run_flags(gmres, gmres_flags, sk::ExperimentKind::gmres);
  CLI::App* eig = app.add_subcommand("eig", "Rayleigh-Ritz with restarting for dominant eigenpairs");
  add_run_flags(eig, eig_flags, sk::ExperimentKind::eig);
  CLI::App* certify = app.add_subcommand("certify", "RBGS of a Matrix Market file, exit 2 unless certified");
  add_run_flags(certify, cert_flags, sk::ExperimentKind::qr_synthetic);

  CLI::App* gen = app.add_subcommand("gen", "write a generated matrix in Matrix Market format");
  std::string gen_kind, gen_out, gen_grid = "100x100";
  std::size_t gen_n = 32768, gen_m = 150;
  double gen_shift = 0.0, gen_cond = 1e4;
  std::uint64_t gen_seed = sk::kDefaultSeed;
  gen->add_option("kind", gen_kind, "synthetic, laplacian or conditioned")
      ->required()
      ->check(CLI::IsMember({"synthetic", "laplacian", "conditioned"}));
  gen->add_option("-o,--output", gen_out, "output file")->required();
  gen->add_option("--n", gen_n, "rows");
  gen->add_option("--m", gen_m, "columns");
  gen->add_option("--grid", gen_grid, "Laplacian grid");
  gen->add_option("--shift", gen_shift, "Laplacian shift");
  gen->add_option("--cond", gen_cond, "condition number");
  gen->add_option("--seed", gen_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? sk::kExitOk : sk::kExitError;
  }

  try {
    if (qr->parsed()) return report(sk::run_experiment(build_config(sk::ExperimentKind::qr_synthetic, qr_flags)));
    if (gmres->parsed()) return report(sk::run_experiment(build_config(sk::ExperimentKind::gmres, gmres_flags)));
    if (eig->parsed()) return report(sk::run_experiment(build_config(sk::ExperimentKind::eig, eig_flags)));
    if (certify->parsed()) {
      sk::ExperimentConfig cfg = build_config(sk::ExperimentKind::qr_synthetic, cert_flags);
      if (cfg.matrix.empty()) throw sk::InvalidArgument("certify needs --matrix");
      cfg.method = sk::ExperimentMethod::rbgs;
      cfg.certify_gate = true;
      return report(sk::run_experiment(cfg));
    }
    if (gen->parsed()) {
      if (gen_kind == "synthetic") {
        sk::save_matrix_market(gen_out, sk::gen_synthetic_51(gen_n, gen_m));
      } else if (gen_kind == "laplacian") {
        sk::save_matrix_market(gen_out, sk::gen_laplacian_csr(parse_grid(gen_grid), gen_shift));
      } else {
        sk::save_matrix_market(gen_out, sk::random_with_condition(gen_n, gen_m, gen_cond, gen_seed));
      }
      return sk::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sk::kExitError;
  }
  return sk::kExitError;
}
