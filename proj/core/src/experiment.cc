// Copyright 2026 The foce Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "foce/experiment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "foce/certify.h"
#include "foce/deviations.h"
#include "foce/dynamics.h"
#include "foce/errors.h"
#include "foce/games.h"
#include "foce/geometry.h"
#include "foce/normal_form.h"
#include "foce/phi_regret.h"
#include "foce/regret.h"

namespace foce {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes = {"dynamics",    "regret",  "match-stationary",
                                                 "match-local", "certify", "nf-audit"};
  return modes;
}

std::string join_doubles(std::span<const double> v, const char* sep = " ") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += format_double(v[k]);
  }
  return s;
}

std::string join_ints(std::span<const int> v, int offset = 0) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += " ";
    s += std::to_string(v[k] + offset);
  }
  return s;
}

std::string join_vector(const Vector& v) { return join_doubles({v.data(), std::size_t(v.size())}); }

std::string read_text(const fs::path& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(key, "cannot open file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Everything resolved from the config before any mode runs.
struct Setup {
  const KeyValueDocument* cfg = nullptr;
  RunOptions options;
  std::string mode;
  std::uint64_t seed = 0;
  std::optional<SmoothGame> game;
  std::optional<NormalFormGame> nf;
};

ConvexSet parse_set(const KeyValueDocument& cfg, const std::string& prefix) {
  const std::string kind_key = prefix + ".kind";
  const std::string kind = cfg.get(kind_key);
  try {
    if (kind == "box") {
      const std::vector<double> lo = cfg.get_doubles(prefix + ".lower");
      const std::vector<double> hi = cfg.get_doubles(prefix + ".upper");
      if (lo.size() != hi.size()) {
        throw ConfigError(prefix + ".upper", "length differs from " + prefix + ".lower");
      }
      const auto n = static_cast<Eigen::Index>(lo.size());
      return ConvexSet::Box(Eigen::Map<const Vector>(lo.data(), n),
                            Eigen::Map<const Vector>(hi.data(), n));
    }
    if (kind == "simplex") return ConvexSet::Simplex(static_cast<int>(cfg.get_int(prefix + ".dim")));
    if (kind == "ball") {
      const std::vector<double> c = cfg.get_doubles(prefix + ".center");
      return ConvexSet::Ball(Eigen::Map<const Vector>(c.data(), Eigen::Index(c.size())),
                             cfg.get_double(prefix + ".radius"));
    }
    if (kind == "polyhedron") {
      const std::vector<std::vector<double>> rows = cfg.get_rows(prefix + ".A");
      const std::vector<double> b = cfg.get_doubles(prefix + ".b");
      if (rows.empty() || rows.size() != b.size()) {
        throw ConfigError(prefix + ".b", "need one offset per row of " + prefix + ".A");
      }
      Matrix A(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) {
          throw ConfigError(prefix + ".A", "rows have different lengths");
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) A(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
      }
      return ConvexSet::Polyhedron(A, Eigen::Map<const Vector>(b.data(), Eigen::Index(b.size())));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(prefix, e.what());
  }
  throw ConfigError(kind_key, "unknown set kind '" + kind + "' (box, simplex, ball, polyhedron)");
}

NormalFormGame load_normal_form(const KeyValueDocument& cfg, const RunOptions& opts,
                                std::uint64_t seed) {
  if (cfg.has("game.file")) {
    const fs::path p = opts.base_dir / cfg.get("game.file");
    if (!fs::exists(p)) throw ConfigError("game.file", "no such file " + p.string());
    try {
      return NormalFormGame::parse(read_text(p, "game.file"));
    } catch (const ConfigError& e) {
      throw ConfigError("game.file", std::string(e.what()));
    }
  }
  if (cfg.has("game.random_actions")) {
    std::vector<int> counts = cfg.get_ints("game.random_actions");
    Rng rng(seed);
    return NormalFormGame::random(std::move(counts), rng);
  }
  const std::string name = cfg.get("game.builtin");
  for (auto& [n, g] : NormalFormGame::bundled_2x2()) {
    if (n == name) return g;
  }
  throw ConfigError("game.builtin", "unknown bundled game '" + name + "'");
}

Setup resolve(const KeyValueDocument& cfg, const RunOptions& opts) {
  Setup s;
  s.cfg = &cfg;
  s.options = opts;
  s.mode = cfg.get("mode");
  if (std::find(known_modes().begin(), known_modes().end(), s.mode) == known_modes().end()) {
    throw ConfigError("mode", "unknown mode '" + s.mode + "'");
  }
  if (opts.seed) {
    s.seed = *opts.seed;
    cfg.has("seed");
  } else {
    const long long seed = cfg.get_int("seed");
    if (seed < 0) throw ConfigError("seed", "must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  const std::string kind = cfg.get("game");
  if (kind == "pennies") {
    s.game = matching_pennies();
  } else if (kind == "bilinear") {
    const std::vector<std::vector<double>> rows = cfg.get_rows("game.matrix");
    ConvexSet X1 = parse_set(cfg, "set.1"), X2 = parse_set(cfg, "set.2");
    if (rows.size() != std::size_t(X1.dim())) {
      throw ConfigError("game.matrix", "row count must equal the dimension of set.1");
    }
    Matrix M(X1.dim(), X2.dim());
    for (int r = 0; r < X1.dim(); ++r) {
      if (rows[r].size() != std::size_t(X2.dim())) {
        throw ConfigError("game.matrix", "column count must equal the dimension of set.2");
      }
      for (int c = 0; c < X2.dim(); ++c) M(r, c) = rows[r][c];
    }
    s.game = bilinear_game(std::move(X1), std::move(X2), std::move(M));
  } else if (kind == "normal_form") {
    s.nf = load_normal_form(cfg, opts, s.seed);
    s.game = multilinear_extension(*s.nf);
  } else {
    throw ConfigError("game", "unknown game '" + kind + "' (pennies, bilinear, normal_form)");
  }
  return s;
}

MuMode parse_mu(const KeyValueDocument& cfg, MuMode fallback) {
  if (!cfg.has("schedule.mu")) return fallback;
  const std::string m = cfg.get("schedule.mu");
  if (m == "unit") return MuMode::kUnit;
  if (m == "inverse_eta") return MuMode::kInverseEta;
  throw ConfigError("schedule.mu", "expected unit or inverse_eta");
}

int parse_T(const KeyValueDocument& cfg) {
  const long long T = cfg.get_int("schedule.T");
  if (T < 1 || T > 100000000) throw ConfigError("schedule.T", "must be in [1, 1e8]");
  return static_cast<int>(T);
}

StepSchedule parse_schedule(const KeyValueDocument& cfg) {
  const std::string kind = cfg.get("schedule.kind", "inverse_sqrt");
  try {
    if (kind == "inverse_sqrt") {
      return StepSchedule::InverseSqrt(cfg.get_double("schedule.C"),
                                       parse_mu(cfg, MuMode::kInverseEta));
    }
    if (kind == "constant") {
      return StepSchedule::Constant(cfg.get_double("schedule.eta"), parse_mu(cfg, MuMode::kUnit));
    }
    if (kind == "custom") {
      return StepSchedule::Custom(cfg.get_doubles("schedule.steps"), parse_mu(cfg, MuMode::kUnit));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError("schedule", e.what());
  }
  throw ConfigError("schedule.kind", "unknown schedule '" + kind + "'");
}

Profile parse_point(const Setup& s, const std::string& key) {
  const SmoothGame& game = *s.game;
  const std::string text = s.cfg->get(key);
  if (text == "random") {
    Rng rng(s.seed);
    return sample_profile(game.sets(), rng, 0.0);
  }
  const std::vector<double> flat = s.cfg->get_doubles(key);
  if (static_cast<int>(flat.size()) != game.total_dim()) {
    throw ConfigError(key, "expected " + std::to_string(game.total_dim()) + " coordinates");
  }
  const Profile x = unflatten(Eigen::Map<const Vector>(flat.data(), Eigen::Index(flat.size())),
                              game.dims());
  if (!contains(game.sets(), x)) throw ConfigError(key, "point lies outside the action sets");
  return x;
}

const NormalFormGame& require_nf(const Setup& s, const std::string& key) {
  if (!s.nf) throw ConfigError(key, "needs game = normal_form");
  return *s.nf;
}

std::vector<int> parse_actions(const Setup& s, const std::string& key) {
  const NormalFormGame& nf = require_nf(s, key);
  std::vector<int> a = s.cfg->get_ints(key);
  if (static_cast<int>(a.size()) != nf.num_players()) {
    throw ConfigError(key, "need one action per player");
  }
  for (int i = 0; i < nf.num_players(); ++i) {
    if (a[i] < 1 || a[i] > nf.action_counts()[i]) {
      throw ConfigError(key, "actions are 1-based and must be within the action counts");
    }
    --a[i];
  }
  return a;
}

void append(FieldFamily& to, const FieldFamily& from) {
  for (const VectorField& f : from.fields()) to.add(f);
}

FieldFamily parse_family(const Setup& s) {
  const KeyValueDocument& cfg = *s.cfg;
  const SmoothGame& game = *s.game;
  FieldFamily family;
  for (const std::string& item : cfg.get_list("family")) {
    try {
      if (item == "pull_to_point") {
        append(family, pull_to_point_family(game.sets()));
      } else if (item == "radial") {
        family.add(radial_field(game.sets()));
      } else if (item == "extension_2x2") {
        if (game.num_players() != 2 || game.dims()[0] != 1 || game.dims()[1] != 1) {
          throw ConfigError("family", "extension_2x2 needs two one-dimensional players");
        }
        append(family, extension_family_2x2());
      } else if (item == "ce") {
        append(family, ce_field_family(require_nf(s, "family")));
      } else if (item == "aggregated_pull") {
        const std::vector<int> a = parse_actions(s, "family.a_star");
        family.add(aggregated_pull_field(*s.nf, a));
      } else if (item.rfind("affine.", 0) == 0) {
        const std::string name = item.substr(7);
        const std::string key = "family." + name;
        const std::vector<std::vector<double>> rows = cfg.get_rows(key + ".P");
        const std::vector<double> q = cfg.get_doubles(key + ".q");
        const int n = game.total_dim();
        if (static_cast<int>(rows.size()) != n || static_cast<int>(q.size()) != n) {
          throw ConfigError(key + ".P", "need a square matrix of the total dimension");
        }
        Matrix P(n, n);
        for (int r = 0; r < n; ++r) {
          if (static_cast<int>(rows[r].size()) != n) throw ConfigError(key + ".P", "not square");
          for (int c = 0; c < n; ++c) P(r, c) = rows[r][c];
        }
        family.add(VectorField::Affine(name, P, Eigen::Map<const Vector>(q.data(), n), game.sets()));
      } else {
        throw ConfigError("family", "unknown field builder '" + item + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError("family", e.what());
    }
  }
  if (family.empty()) throw ConfigError("family", "empty field family");
  return family;
}

// Named scalar functions for time averages and certificates.
Metric parse_metric(const std::string& name, const std::string& key) {
  if (name == "radius_sq") return [](const Profile& x) { return squared_norm(x); };
  if (name == "neg_radius_sq") return [](const Profile& x) { return -squared_norm(x); };
  if (name == "zero") return [](const Profile&) { return 0.0; };
  throw ConfigError(key, "unknown function '" + name + "' (radius_sq, neg_radius_sq, zero)");
}

class ArtifactWriter {
 public:
  ArtifactWriter(const Setup& s, RunResult& result) : result_(result) {
    const std::string configured = s.cfg->get("output", ".");
    dir_ = s.options.out_dir ? *s.options.out_dir : s.options.base_dir / configured;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("output", "cannot create " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw InputError("cannot write " + p.string());
    result_.artifacts.push_back(p);
  }

 private:
  fs::path dir_;
  RunResult& result_;
};

std::string serialize_distribution(const EmpiricalDistribution& d) {
  std::ostringstream os;
  os << "report = distribution\n";
  os << "points = " << d.points.size() << "\n";
  Vector mean;
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    const Vector x = flatten(d.points[k]);
    if (k == 0) mean = Vector::Zero(x.size());
    mean += d.weights[k] * x;
  }
  os << "mean = " << join_vector(mean) << "\n";
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    os << "point." << (k + 1) << ".weight = " << format_double(d.weights[k]) << "\n";
    os << "point." << (k + 1) << ".x = " << join_vector(flatten(d.points[k])) << "\n";
  }
  return os.str();
}

std::string serialize_action_distribution(const NormalFormGame& nf, const ActionDistribution& a) {
  std::ostringstream os;
  os << "report = action_distribution\n";
  os << "profiles = " << a.size() << "\n";
  for (std::size_t f = 0; f < a.size(); ++f) {
    os << "profile." << (f + 1) << ".actions = " << join_ints(nf.actions_of(f), 1) << "\n";
    os << "profile." << (f + 1) << ".prob = " << format_double(a[f]) << "\n";
  }
  return os.str();
}

void note_warnings(const std::vector<std::string>& w, std::ostringstream& summary) {
  for (const std::string& s : w) summary << "warning: " << s << "\n";
}

int run_dynamics(const Setup& s, ArtifactWriter& out, std::ostringstream& summary) {
  const KeyValueDocument& cfg = *s.cfg;
  const StepSchedule schedule = parse_schedule(cfg);
  const int T = parse_T(cfg);
  const Profile x0 = parse_point(s, "init");
  const Trajectory traj = run_pga(*s.game, x0, T, schedule);
  out.write("trajectory.csv", traj.to_csv());
  note_warnings(traj.warnings(), summary);
  summary << "steps = " << T << "\n";
  summary << "tau_bar = " << format_double(traj.tau_bar()) << "\n";
  if (s.mode == "dynamics") {
    if (cfg.has("average")) {
      const int M = static_cast<int>(cfg.get_int("quadrature.M", 16));
      std::ostringstream os;
      os << "report = averages\n";
      os << "tau_bar = " << format_double(traj.tau_bar()) << "\n";
      for (const std::string& name : cfg.get_list("average")) {
        const double v = curve_average(traj, parse_metric(name, "average"), M);
        os << "average." << name << " = " << format_double(v) << "\n";
        summary << "average." << name << " = " << format_double(v) << "\n";
      }
      out.write("averages.txt", os.str());
    }
    return kExitOk;
  }

  const FieldFamily family = parse_family(s);
  const int M = static_cast<int>(cfg.get_int("quadrature.M", 16));
  if (M < 1) throw ConfigError("quadrature.M", "must be >= 1");
  const std::string which = cfg.get("regret.mode", "both");
  std::vector<RegretMode> modes;
  if (which == "stationary" || which == "both") modes.push_back(RegretMode::kStationary);
  if (which == "local" || which == "both") modes.push_back(RegretMode::kLocal);
  if (modes.empty()) throw ConfigError("regret.mode", "expected stationary, local or both");
  const std::string estimator = cfg.get("regret.estimator", "curve");
  if (estimator != "curve" && estimator != "samples") {
    throw ConfigError("regret.estimator", "expected curve or samples");
  }
  int exit_code = kExitOk;
  for (RegretMode m : modes) {
    RegretReport rep;
    if (estimator == "curve") {
      rep = regret_report(traj, *s.game, family, m, M);
    } else {
      const long long n = cfg.get_int("regret.samples");
      if (n < 1) throw ConfigError("regret.samples", "must be >= 1");
      rep = regret_report(sample_uniform(traj, static_cast<int>(n), s.seed), *s.game, family, m);
    }
    rep.set_class = to_string(classify_sets(s.game->sets()).set_class);
    out.write(std::string("regret_") + to_string(m) + ".txt", rep.serialize());
    summary << to_string(m) << ".family_max = " << format_double(rep.family_max) << "\n";
    if (!rep.all_within_bound()) {
      summary << to_string(m) << ": bound violated\n";
      exit_code = kExitBoundFailed;
    }
  }
  return exit_code;
}

int run_matcher(const Setup& s, ArtifactWriter& out, std::ostringstream& summary) {
  const KeyValueDocument& cfg = *s.cfg;
  const FieldFamily family = parse_family(s);
  MatcherOptions opt;
  opt.epsilon = cfg.get_double("matcher.epsilon", opt.epsilon);
  const long long iters = cfg.get_int("matcher.max_iter", opt.max_iter);
  if (iters < 1) throw ConfigError("matcher.max_iter", "must be >= 1");
  opt.max_iter = static_cast<int>(iters);
  opt.oracle_tol = cfg.get_double("matcher.oracle_tol", opt.oracle_tol);
  opt.allow_non_tangential = cfg.get_bool("matcher.allow_non_tangential", false);
  const std::string rule = cfg.get("matcher.rule", "harmonic");
  if (rule == "harmonic") {
    opt.rule = StepRule::kHarmonic;
  } else if (rule == "line_search") {
    opt.rule = StepRule::kLineSearch;
  } else {
    throw ConfigError("matcher.rule", "expected harmonic or line_search");
  }
  const EmpiricalDistribution sigma1 = EmpiricalDistribution::point_mass(parse_point(s, "matcher.init"));
  const MatcherState st = s.mode == "match-stationary"
                              ? regret_match_stationary(*s.game, family, sigma1, opt)
                              : regret_match_local(*s.game, family, sigma1, opt);
  note_warnings(st.warnings, summary);
  out.write("matcher_log.csv", st.log_csv());
  out.write("distribution.txt", serialize_distribution(st.sigma));
  if (s.nf) {
    out.write("action_distribution.txt",
              serialize_action_distribution(*s.nf, induce_action_distribution(st.sigma, *s.nf)));
  }
  summary << "status = " << to_string(st.status) << "\n";
  summary << "distributions = " << st.t << "\n";
  summary << "final_max_mu = " << format_double(st.log.empty() ? 0.0 : st.log.back().max_mu)
          << "\n";
  if (!st.message.empty()) summary << "message = " << st.message << "\n";
  if (st.status == MatcherStatus::kBoundViolated || st.status == MatcherStatus::kOracleFailure) {
    return kExitBoundFailed;
  }
  return kExitOk;
}

DualProgram parse_program(const std::string& p) {
  if (p == "coarse-stationary") return DualProgram::kCoarseStationary;
  if (p == "coarse-local") return DualProgram::kCoarseLocal;
  if (p == "fields-stationary") return DualProgram::kFieldsStationary;
  if (p == "fields-local") return DualProgram::kFieldsLocal;
  throw ConfigError("certificate.program",
                    "expected coarse-stationary, coarse-local, fields-stationary or fields-local");
}

int run_certify(const Setup& s, ArtifactWriter& out, std::ostringstream& summary) {
  const KeyValueDocument& cfg = *s.cfg;
  Certificate cert;
  const std::string kind = cfg.get("certificate.kind");
  if (kind == "pennies_radius") {
    if (s.game->name() != matching_pennies().name()) {
      throw ConfigError("certificate.kind", "pennies_radius needs game = pennies");
    }
    try {
      cert = pennies_radius_certificate(cfg.get_double("certificate.M1"),
                                        cfg.get_double("certificate.M2", 10.0));
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError("certificate.M1", e.what());
    }
  } else if (kind == "custom") {
    cert.program = parse_program(cfg.get("certificate.program"));
    const FieldFamily family = parse_family(s);
    std::vector<double> w = cfg.get_doubles("certificate.weights");
    if (w.size() != family.size()) {
      throw ConfigError("certificate.weights", "need one weight per field");
    }
    if (cert.program == DualProgram::kCoarseStationary || cert.program == DualProgram::kCoarseLocal) {
      if (!family.coarse()) throw ConfigError("family", "coarse programs need gradient fields");
      cert.h = combine(family, w, false);
    } else {
      cert.family = family;
      cert.weights = std::move(w);
    }
    cert.gamma = cfg.get_double("certificate.gamma");
    cert.q = parse_metric(cfg.get("certificate.q"), "certificate.q");
    cert.name = cfg.get("certificate.name", "custom");
  } else {
    throw ConfigError("certificate.kind", "expected pennies_radius or custom");
  }
  GridSpec grid;
  grid.resolution = static_cast<int>(cfg.get_int("grid.resolution", 0));
  grid.random_samples = static_cast<int>(cfg.get_int("grid.samples", 0));
  grid.seed = s.seed;
  if (grid.resolution < 0 || grid.random_samples < 0 ||
      (grid.resolution == 0 && grid.random_samples == 0)) {
    throw ConfigError("grid.resolution", "need a positive grid resolution or sample count");
  }
  const double tol = cfg.get_double("certificate.tol", 1e-6);
  const CertificateReport rep = check_certificate(*s.game, cert, grid);
  out.write("certificate.txt", rep.serialize());
  summary << "min_margin = " << format_double(rep.min_margin) << "\n";
  summary << "feasible = " << (rep.feasible(tol) ? "true" : "false") << "\n";
  return rep.feasible(tol) ? kExitOk : kExitBoundFailed;
}

EquilibriumKind parse_kind(const std::string& k, const std::string& key) {
  if (k == "cce") return EquilibriumKind::kCoarseCorrelated;
  if (k == "ce") return EquilibriumKind::kCorrelated;
  if (k == "average_cce") return EquilibriumKind::kAverageCoarseCorrelated;
  throw ConfigError(key, "expected cce, ce or average_cce");
}

int run_audit(const Setup& s, ArtifactWriter& out, std::ostringstream& summary) {
  const KeyValueDocument& cfg = *s.cfg;
  const NormalFormGame& nf = require_nf(s, "game");
  ActionDistribution sigma;
  if (cfg.has("audit.point")) {
    sigma.assign(nf.num_profiles(), 0.0);
    sigma[nf.flat_index(parse_actions(s, "audit.point"))] = 1.0;
  } else {
    sigma = cfg.get_doubles("audit.sigma");
    if (sigma.size() != nf.num_profiles()) {
      throw ConfigError("audit.sigma", "need one probability per pure profile");
    }
  }
  const double tol = cfg.get_double("audit.tol", 1e-9);
  std::vector<int> a_star;
  std::ostringstream os;
  os << "report = audit\n";
  for (const std::string& k : cfg.get_list("audit.kind")) {
    const EquilibriumKind kind = parse_kind(k, "audit.kind");
    if (kind == EquilibriumKind::kAverageCoarseCorrelated && a_star.empty()) {
      a_star = parse_actions(s, "audit.a_star");
    }
    EquilibriumReport rep;
    try {
      rep = check_equilibrium(nf, sigma, kind, tol, a_star);
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError(cfg.has("audit.point") ? "audit.point" : "audit.sigma", e.what());
    }
    os << "kind = " << k << "\n";
    os << rep.serialize();
    summary << k << ".max_violation = " << format_double(rep.max_violation) << "\n";
  }
  if (cfg.has("audit.q")) {
    const std::vector<double> q = cfg.get_doubles("audit.q");
    if (q.size() != nf.num_profiles()) throw ConfigError("audit.q", "need one value per profile");
    const EquilibriumKind kind = parse_kind(cfg.get("audit.lp_kind", "cce"), "audit.lp_kind");
    if (kind == EquilibriumKind::kAverageCoarseCorrelated) {
      throw ConfigError("audit.lp_kind", "expected cce or ce");
    }
    for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
      const WorstCaseResult r = worst_case_expectation(nf, q, kind, sense);
      const char* tag = sense == Sense::kMinimize ? "lp.min" : "lp.max";
      os << tag << ".value = " << format_double(r.value) << "\n";
      os << tag << ".sigma = " << join_doubles(r.sigma) << "\n";
      os << tag << ".complementary_slackness = " << format_double(r.complementary_slackness)
         << "\n";
      summary << tag << ".value = " << format_double(r.value) << "\n";
    }
  }
  if (cfg.has("audit.smoothness.lambda")) {
    SmoothnessParams p;
    p.lambda = cfg.get_double("audit.smoothness.lambda");
    p.mu = cfg.get_double("audit.smoothness.mu");
    const SmoothnessReport r = check_smoothness(nf, p);
    os << "smoothness.holds = " << (r.holds ? "true" : "false") << "\n";
    os << "smoothness.worst_slack = " << format_double(r.worst_slack) << "\n";
    os << "smoothness.a_star = " << join_ints(r.a_star, 1) << "\n";
    if (p.mu < 1.0) os << "smoothness.poa_bound = " << format_double(poa_bound(p)) << "\n";
  }
  out.write("audit.txt", os.str());
  return kExitOk;
}

}  // namespace

RunResult run_experiment(const KeyValueDocument& config, const RunOptions& options) {
  const Setup s = resolve(config, options);
  RunResult result;
  ArtifactWriter out(s, result);
  std::ostringstream summary;
  summary << "mode = " << s.mode << "\n";
  summary << "seed = " << s.seed << "\n";
  if (s.mode == "dynamics" || s.mode == "regret") {
    result.exit_code = run_dynamics(s, out, summary);
  } else if (s.mode == "match-stationary" || s.mode == "match-local") {
    result.exit_code = run_matcher(s, out, summary);
  } else if (s.mode == "certify") {
    result.exit_code = run_certify(s, out, summary);
  } else {
    result.exit_code = run_audit(s, out, summary);
  }
  for (const std::string& k : config.unused_keys()) summary << "warning: unused key " << k << "\n";
  result.summary = summary.str();
  return result;
}

std::string describe_experiment(const KeyValueDocument& config, const RunOptions& options) {
  const Setup s = resolve(config, options);
  const SmoothGame& game = *s.game;
  std::ostringstream os;
  os << "plan = " << s.mode << "\n";
  os << "game = " << game.name() << "\n";
  os << "players = " << game.num_players() << "\n";
  os << "dims = " << join_ints(game.dims()) << "\n";
  os << "G = " << join_doubles(game.G()) << "\n";
  os << "L = " << join_doubles(game.L()) << "\n";
  for (int i = 0; i < game.num_players(); ++i) {
    os << "set." << (i + 1) << " = " << game.set(i).describe() << "\n";
  }
  const SetGeometry geo = classify_sets(game.sets());
  os << "diameter = " << format_double(geo.diameter) << "\n";
  os << "set_class = " << to_string(geo.set_class) << "\n";
  os << "K = " << join_doubles(geo.K) << "\n";
  os << "seed = " << s.seed << "\n";
  if (s.mode == "dynamics" || s.mode == "regret") {
    const StepSchedule schedule = parse_schedule(config);
    const int T = parse_T(config);
    schedule.validate(T);
    parse_point(s, "init");
    os << "schedule = " << schedule.describe() << "\n";
    os << "T = " << T << "\n";
    double G_h = 0.0;
    if (config.has("family")) {
      const FieldFamily family = parse_family(s);
      G_h = family.max_G();
      os << "family.size = " << family.size() << "\n";
      for (std::size_t k = 0; k < family.size(); ++k) {
        os << "family." << (k + 1) << " = " << family[k].name()
           << " G=" << format_double(family[k].G()) << " L=" << format_double(family[k].L())
           << (family[k].is_gradient() ? " gradient" : "") << "\n";
      }
    }
    os << "G_h = " << format_double(G_h) << "\n";
    const BoundInputs in = bound_inputs(game, schedule, T, G_h);
    switch (geo.set_class) {
      case SetClass::kAcute:
        os << "guarantee = acute polyhedra bound\n";
        break;
      case SetClass::kCurved:
        os << "guarantee = curvature bound with K = " << join_doubles(geo.K) << "\n";
        break;
      case SetClass::kNoGuarantee:
        os << "guarantee = no guarantee\n";
        break;
    }
    const std::optional<double> b = bound_formula(in);
    os << "poly_factor = " << format_double(poly_factor(in)) << "\n";
    os << "bound = " << (b ? format_double(*b) : std::string("no guarantee")) << "\n";
  } else if (s.mode == "match-stationary" || s.mode == "match-local") {
    const FieldFamily family = parse_family(s);
    parse_point(s, "matcher.init");
    double sum_G = 0.0;
    for (double g : game.G()) sum_G += g;
    os << "family.size = " << family.size() << "\n";
    os << "bound_constant = " << format_double(sum_G * family.max_G()) << "\n";
    os << "guarantee = max regret <= sqrt(" << family.size() << " / (t + 1)) * "
       << format_double(sum_G * family.max_G()) << "\n";
  } else if (s.mode == "certify") {
    os << "certificate.kind = " << config.get("certificate.kind") << "\n";
    os << "grid.resolution = " << config.get_int("grid.resolution", 0) << "\n";
    os << "grid.samples = " << config.get_int("grid.samples", 0) << "\n";
  } else {
    const NormalFormGame& nf = require_nf(s, "game");
    os << "profiles = " << nf.num_profiles() << "\n";
    os << "audit.kind = " << config.get("audit.kind") << "\n";
  }
  return os.str();
}

std::string config_reference() {
  return R"(mode                  dynamics | regret | match-stationary | match-local | certify | nf-audit
seed                  non-negative integer (required unless --seed is given)
output                artifact directory, relative to the config file
game                  pennies | bilinear | normal_form
game.matrix           bilinear payoff matrix, rows separated by ';'
game.builtin          prisoners_dilemma | matching_pennies | coordination | battle_of_sexes | chicken | stag_hunt
game.file             normal-form document (players, actions, payoff.N)
game.random_actions   action counts of a seeded random normal-form game
set.N.kind            box | simplex | ball | polyhedron (bilinear games)
set.N.lower/upper     box bounds
set.N.dim             simplex dimension
set.N.center/radius   ball
set.N.A / set.N.b     polyhedron rows and offsets, A x <= b
schedule.kind         inverse_sqrt | constant | custom
schedule.C            inverse_sqrt scale
schedule.eta          constant step
schedule.steps        custom steps
schedule.mu           unit | inverse_eta
schedule.T            number of steps
init                  flat initial point, or 'random'
average               dynamics mode: radius_sq | neg_radius_sq | zero
family                comma list: pull_to_point, radial, extension_2x2, ce, aggregated_pull, affine.NAME
family.a_star         1-based pure profile for aggregated_pull
family.NAME.P/.q      affine field x -> P x + q
quadrature.M          nodes per smooth piece (default 16)
regret.mode           stationary | local | both
regret.estimator      curve | samples
regret.samples        sample count for the samples estimator
matcher.init          flat starting point
matcher.epsilon       stopping threshold
matcher.max_iter      iteration cap
matcher.rule          harmonic | line_search
matcher.oracle_tol    accepted fixed-point residual
matcher.allow_non_tangential  true: local mode runs on non-tangential fields with a warning
certificate.kind      pennies_radius | custom
certificate.M1/M2     pennies_radius parameters
certificate.program   coarse-stationary | coarse-local | fields-stationary | fields-local
certificate.weights   one weight per family field
certificate.gamma     claimed bound
certificate.q         radius_sq | neg_radius_sq | zero
certificate.tol       accepted negative margin (default 1e-6)
grid.resolution       points per axis
grid.samples          extra seeded samples
audit.kind            comma list: cce, ce, average_cce
audit.point           1-based pure profile for a point mass
audit.sigma           probabilities over pure profiles (last player fastest)
audit.a_star          1-based target profile for average_cce
audit.tol             violation tolerance
audit.q               objective per pure profile for the LP
audit.lp_kind         cce | ce
audit.smoothness.lambda / .mu   smoothness check on the payoffs read as costs
)";
}

}  // namespace foce
