#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sketchkrylov/rbgs.hpp"
#include "sketchkrylov/sketch.hpp"

namespace sketchkrylov {

enum class ExperimentKind { qr_synthetic, gmres, eig, custom_qr };
// unique_coarse: everything but the inter-block QR in binary32; unique_fine:
// binary64 throughout; multi: binary32 update, binary64 elsewhere.
enum class PrecisionMode { unique_coarse, unique_fine, multi };
enum class ExperimentMethod { bcgs, bmgs, bcgs2, rbgs, subspace };

std::string to_string(ExperimentKind k);
std::string to_string(PrecisionMode p);  // "f32", "f64", "multi"
std::string to_string(ExperimentMethod m);
ExperimentKind parse_experiment_kind(const std::string& s);
PrecisionMode parse_precision_mode(const std::string& s);
ExperimentMethod parse_experiment_method(const std::string& s);

// Environment variable consulted when the config has no seed.
inline constexpr const char* kSeedEnvVar = "SKETCH_KRYLOV_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::qr_synthetic;
  // Matrix Market file; empty means generated input.
  std::string matrix;
  // qr_synthetic input size.
  std::size_t n = 32768;
  std::size_t m = 150;
  // gmres / eig operator: Laplacian on `grid` plus shift * I, or
  // shift * I - Laplacian when `negate` is set.
  std::vector<std::size_t> grid{100, 100};
  double shift = 0.0;
  bool negate = false;

  ExperimentMethod method = ExperimentMethod::rbgs;
  SketchKind sketch = SketchKind::srht;
  std::size_t sketch_dim = 1500;
  std::optional<std::uint64_t> seed;
  std::size_t block = 10;
  PrecisionMode precision = PrecisionMode::multi;
  LsSolver solver = LsSolver::richardson(5);
  // rbgs: rgs | cholqr:N | l2_cholqr; classic: householder | cgs2 | cholqr.
  // Empty selects l2_cholqr or householder.
  std::string interblock;
  // Krylov iterations per cycle; each cycle builds restart + 1 blocks.
  std::size_t restart = 10;
  std::size_t cycles = 10;
  double tolerance = 0.0;
  PrecisionSpec matvec = PrecisionSpec::fine();
  // Exit with code 2 when the final delta or delta_tilde exceeds 0.1.
  bool certify_gate = false;
  std::string out = "out";

  // Desk-scale defaults for each experiment.
  static ExperimentConfig defaults(ExperimentKind kind);

  // Throws InvalidArgument naming the offending key.
  void validate() const;
  std::uint64_t resolved_seed() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

// One key=value per line; '#' starts a comment. Keys not present keep the
// defaults of the given experiment. Throws ParseError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Applies one key=value pair; throws InvalidArgument for unknown keys.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string serialize_config(const ExperimentConfig& cfg);

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 1 hard error, 2 certification failure
  std::string csv;
  std::string summary;
  std::string error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertification = 2;

// Runs the experiment; writes results.csv and summary.txt into cfg.out unless
// it is empty. Never throws.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace sketchkrylov
