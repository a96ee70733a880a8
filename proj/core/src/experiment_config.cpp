#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "sketchkrylov/classic_bgs.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/experiment.hpp"
#include "sketchkrylov/text_format.hpp"

namespace sketchkrylov {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("not a boolean: '" + v + "'");
}

std::uint64_t parse_seed(const std::string& v) {
  std::uint64_t seed = 0;
  std::istringstream ss(v);
  if (v.empty() || v[0] == '-' || !(ss >> seed) || !ss.eof()) throw InvalidArgument("not a seed: '" + v + "'");
  return seed;
}

std::string grid_to_string(const std::vector<std::size_t>& grid) {
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) s += (i ? "x" : "") + std::to_string(grid[i]);
  return s;
}

PrecisionSpec parse_format(const std::string& v) {
  if (v == "f32") return PrecisionSpec::coarse();
  if (v == "f64") return PrecisionSpec::fine();
  throw InvalidArgument("precision must be f32 or f64, got '" + v + "'");
}

bool is_classic(ExperimentMethod m) {
  return m == ExperimentMethod::bcgs || m == ExperimentMethod::bmgs || m == ExperimentMethod::bcgs2;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::qr_synthetic: return "qr_synthetic";
    case ExperimentKind::gmres: return "gmres";
    case ExperimentKind::eig: return "eig";
    case ExperimentKind::custom_qr: return "custom_qr";
  }
  return "?";
}

std::string to_string(PrecisionMode p) {
  switch (p) {
    case PrecisionMode::unique_coarse: return "f32";
    case PrecisionMode::unique_fine: return "f64";
    case PrecisionMode::multi: return "multi";
  }
  return "?";
}

std::string to_string(ExperimentMethod m) {
  switch (m) {
    case ExperimentMethod::bcgs: return "bcgs";
    case ExperimentMethod::bmgs: return "bmgs";
    case ExperimentMethod::bcgs2: return "bcgs2";
    case ExperimentMethod::rbgs: return "rbgs";
    case ExperimentMethod::subspace: return "subspace";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::qr_synthetic, ExperimentKind::gmres, ExperimentKind::eig, ExperimentKind::custom_qr}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown experiment '" + s + "'");
}

PrecisionMode parse_precision_mode(const std::string& s) {
  for (auto p : {PrecisionMode::unique_coarse, PrecisionMode::unique_fine, PrecisionMode::multi}) {
    if (to_string(p) == s) return p;
  }
  throw InvalidArgument("unknown precision mode '" + s + "' (expected f32, f64 or multi)");
}

ExperimentMethod parse_experiment_method(const std::string& s) {
  for (auto m : {ExperimentMethod::bcgs, ExperimentMethod::bmgs, ExperimentMethod::bcgs2, ExperimentMethod::rbgs,
                 ExperimentMethod::subspace}) {
    if (to_string(m) == s) return m;
  }
  throw InvalidArgument("unknown method '" + s + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::qr_synthetic:
    case ExperimentKind::custom_qr:
      c.solver = LsSolver::cg_normal(20);
      break;
    case ExperimentKind::gmres:
      c.grid = {100, 100};
      c.shift = 16.0;
      c.sketch_dim = 1000;
      c.precision = PrecisionMode::unique_coarse;
      c.restart = 10;
      c.cycles = 3;
      break;
    case ExperimentKind::eig:
      c.grid = {64, 64};
      c.shift = 8.0;
      c.negate = true;
      c.sketch_dim = 1000;
      c.precision = PrecisionMode::unique_fine;
      c.restart = 20;
      c.cycles = 20;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) { throw InvalidArgument(key + ": " + why); };
  const bool qr = experiment == ExperimentKind::qr_synthetic || experiment == ExperimentKind::custom_qr;
  if (experiment == ExperimentKind::qr_synthetic && (n < 2 || m < 2)) fail("n/m", "must be at least 2");
  if (experiment == ExperimentKind::custom_qr && matrix.empty()) fail("matrix", "custom_qr needs a Matrix Market file");
  if (!qr && matrix.empty()) {
    if (grid.empty() || grid.size() > 2) fail("grid", "one or two dimensions expected");
    for (std::size_t d : grid) {
      if (d < 2) fail("grid", "dimensions must be at least 2");
    }
  }
  if (block == 0) fail("block", "must be positive");
  if (sketch_dim == 0) fail("sketch", "sketch dimension must be positive");
  if (method == ExperimentMethod::rbgs && sketch != SketchKind::identity && matrix.empty()) {
    std::size_t rows = n, basis = m;
    if (!qr) {
      rows = 1;
      for (std::size_t d : grid) rows *= d;
      basis = block * (restart + 1);
    }
    if (sketch_dim < basis) {
      fail("sketch", "sketch dimension " + std::to_string(sketch_dim) + " is below the basis size " +
                         std::to_string(basis));
    }
    if (sketch_dim > rows) {
      fail("sketch", "sketch dimension " + std::to_string(sketch_dim) + " exceeds n = " + std::to_string(rows));
    }
  }
  if (method == ExperimentMethod::subspace && experiment != ExperimentKind::eig) {
    fail("method", "subspace iteration is only available for eig");
  }
  if (precision == PrecisionMode::multi && method != ExperimentMethod::rbgs) {
    fail("precision", "multi precision applies to rbgs only");
  }
  if (!interblock.empty() && is_classic(method)) {
    try {
      parse_classic_interblock(interblock);
    } catch (const Error& e) {
      fail("interblock", e.what());
    }
  } else if (!interblock.empty() && method == ExperimentMethod::rbgs) {
    try {
      parse_interblock(interblock);
    } catch (const Error& e) {
      fail("interblock", e.what());
    }
  }
  try {
    solver.validate();
  } catch (const Error& e) {
    fail("solver", e.what());
  }
  if (!qr && (restart == 0 || cycles == 0)) fail("restart/cycles", "must be positive");
  if (!(tolerance >= 0.0)) fail("tolerance", "must be non-negative");
  if (!std::isfinite(shift)) fail("shift", "must be finite");
}

std::uint64_t ExperimentConfig::resolved_seed() const {
  if (seed) return *seed;
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    try {
      return parse_seed(env);
    } catch (const InvalidArgument&) {
      throw InvalidArgument(std::string(kSeedEnvVar) + " is not a valid seed: '" + env + "'");
    }
  }
  return kDefaultSeed;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.matrix == b.matrix && a.n == b.n && a.m == b.m && a.grid == b.grid &&
         a.shift == b.shift && a.negate == b.negate && a.method == b.method && a.sketch == b.sketch &&
         a.sketch_dim == b.sketch_dim && a.seed == b.seed && a.block == b.block && a.precision == b.precision &&
         a.solver == b.solver && a.interblock == b.interblock && a.restart == b.restart && a.cycles == b.cycles &&
         a.tolerance == b.tolerance && a.matvec == b.matvec && a.certify_gate == b.certify_gate && a.out == b.out;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    c.experiment = parse_experiment_kind(value);
  } else if (key == "matrix") {
    c.matrix = value;
  } else if (key == "n") {
    c.n = parse_count(value);
  } else if (key == "m") {
    c.m = parse_count(value);
  } else if (key == "grid") {
    std::vector<std::size_t> g;
    for (const std::string& part : split(value, 'x')) g.push_back(parse_count(part));
    c.grid = std::move(g);
  } else if (key == "shift") {
    c.shift = parse_double(value);
  } else if (key == "negate") {
    c.negate = parse_bool(value);
  } else if (key == "method") {
    c.method = parse_experiment_method(value);
  } else if (key == "sketch") {
    const std::vector<std::string> parts = split(value, ':');
    if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("sketch must be kind:k or kind:k:seed");
    c.sketch = parse_sketch_kind(parts[0]);
    c.sketch_dim = parse_count(parts[1]);
    if (parts.size() == 3) c.seed = parse_seed(parts[2]);
  } else if (key == "seed") {
    if (value.empty()) {
      c.seed.reset();
    } else {
      c.seed = parse_seed(value);
    }
  } else if (key == "block") {
    c.block = parse_count(value);
  } else if (key == "precision") {
    c.precision = parse_precision_mode(value);
  } else if (key == "solver") {
    c.solver = parse_ls_solver(value);
  } else if (key == "interblock") {
    c.interblock = value;
  } else if (key == "restart") {
    c.restart = parse_count(value);
  } else if (key == "cycles") {
    c.cycles = parse_count(value);
  } else if (key == "tolerance") {
    c.tolerance = parse_double(value);
  } else if (key == "matvec") {
    c.matvec = parse_format(value);
  } else if (key == "certify_gate") {
    c.certify_gate = parse_bool(value);
  } else if (key == "out") {
    c.out = value;
  } else {
    throw InvalidArgument("unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::size_t> lines;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (!seen.emplace(key, lineno).second) throw ParseError("duplicate key '" + key + "'", lineno);
    entries.emplace_back(key, trim(line.substr(eq + 1)));
    lines.push_back(lineno);
  }
  ExperimentConfig cfg;
  if (const auto it = seen.find("experiment"); it != seen.end()) {
    const std::size_t idx = static_cast<std::size_t>(
        std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.first == "experiment"; }) -
        entries.begin());
    try {
      cfg = ExperimentConfig::defaults(parse_experiment_kind(entries[idx].second));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), it->second);
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      set_config_value(cfg, entries[i].first, entries[i].second);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lines[i]);
    }
  }
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment=" << to_string(c.experiment) << '\n'
      << "matrix=" << c.matrix << '\n'
      << "n=" << c.n << '\n'
      << "m=" << c.m << '\n'
      << "grid=" << grid_to_string(c.grid) << '\n'
      << "shift=" << format_double(c.shift) << '\n'
      << "negate=" << (c.negate ? "true" : "false") << '\n'
      << "method=" << to_string(c.method) << '\n'
      << "sketch=" << to_string(c.sketch) << ':' << c.sketch_dim << '\n'
      << "seed=" << (c.seed ? std::to_string(*c.seed) : std::string()) << '\n'
      << "block=" << c.block << '\n'
      << "precision=" << to_string(c.precision) << '\n'
      << "solver=" << to_string(c.solver) << '\n'
      << "interblock=" << c.interblock << '\n'
      << "restart=" << c.restart << '\n'
      << "cycles=" << c.cycles << '\n'
      << "tolerance=" << format_double(c.tolerance) << '\n'
      << "matvec=" << (c.matvec.is_coarse() ? "f32" : "f64") << '\n'
      << "certify_gate=" << (c.certify_gate ? "true" : "false") << '\n'
      << "out=" << c.out << '\n';
  return out.str();
}

}  // namespace sketchkrylov
