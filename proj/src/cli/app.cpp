#include "phasespace/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasespace/cli/csv.hpp"
#include "phasespace/cli/manifest.hpp"
#include "phasespace/cli/verify.hpp"
#include "phasespace/dynamics.hpp"
#include "phasespace/error.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/transforms.hpp"

namespace phasespace::cli {

namespace fs = std::filesystem;

namespace {

using Index = Eigen::Index;

constexpr double kMarginalTolerance = 1e-6;
constexpr double kExpectTolerance = 1e-6;

struct SharedOptions {
  std::string grid;
  double hbar = 0.0;
  double mass = 0.0;
  std::string out;
  std::string config;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* hbar_opt = nullptr;
  CLI::Option* mass_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* config_opt = nullptr;
};

struct CommandOptions {
  std::string state;
  std::string in;
  std::string dist = "wigner";
  std::string observable;
  std::string potential;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t truncation = 0;
  bool oracle = false;
  std::size_t snapshot_every = 0;
  std::size_t log_every = 100;
  bool quick = false;
  CLI::Option* state_opt = nullptr;
  CLI::Option* potential_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* truncation_opt = nullptr;
};

int exit_code_for(ErrorCode code) {
  if (is_numerical_guard(code)) return kExitNumericalGuard;
  switch (code) {
    case ErrorCode::NotNormalized:
    case ErrorCode::NotHermitian:
      return kExitCheckFailed;
    default:
      return kExitUsage;
  }
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorCode::InvalidConfig, "--grid expects a,b,n");
  try {
    std::size_t used = 0;
    GridSpec g;
    g.q_min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("a");
    g.q_max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("b");
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n <= 0) throw std::invalid_argument("n");
    g.n = static_cast<std::size_t>(n);
    return g;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidConfig, "--grid expects numbers a,b,n, got '" + text + "'");
  }
}

// Manifest defaults, then the config file, then explicit flags.
RunManifest resolve(const std::string& command, const SharedOptions& shared, const CommandOptions& opts) {
  RunManifest m;
  if (*shared.config_opt) m = manifest_from_json(read_text_file(shared.config));
  m.command = command;
  m.outputs.clear();
  m.checks.clear();
  if (*shared.grid_opt) m.grid = parse_grid(shared.grid);
  if (*shared.hbar_opt) m.constants.hbar = shared.hbar;
  if (*shared.mass_opt) m.constants.mass = shared.mass;
  m.constants.validate();
  if (opts.state_opt && *opts.state_opt) m.state_spec = opts.state;
  if (opts.potential_opt && *opts.potential_opt) {
    m.potential = PolynomialPotential::parse(opts.potential).coefficients();
  }
  if (opts.dt_opt && *opts.dt_opt) m.evolution.dt = opts.dt;
  if (opts.steps_opt && *opts.steps_opt) m.evolution.steps = opts.steps;
  if (opts.truncation_opt && *opts.truncation_opt) m.evolution.truncation = opts.truncation;
  if (!m.state_spec.empty()) m.state_spec = to_string(parse_state_spec(m.state_spec, m.constants));
  return m;
}

fs::path output_dir(const SharedOptions& shared) {
  fs::path dir = ".";
  if (*shared.out_opt) {
    dir = shared.out;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

class OutputSet {
 public:
  OutputSet(fs::path dir, RunManifest& manifest, std::ostream& log)
      : dir_(std::move(dir)), manifest_(manifest), log_(log) {}

  void write(const std::string& name, const std::string& content) {
    write_text_file(dir_ / name, content);
    manifest_.outputs.push_back({name, sha256_hex(content)});
    log_ << "wrote " << (dir_ / name).string() << "\n";
  }

  void finish() {
    write_text_file(dir_ / "manifest.json", to_json(manifest_));
    log_ << "wrote " << (dir_ / "manifest.json").string() << "\n";
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
  std::ostream& log_;
};

PositionGrid grid_of(const RunManifest& m) { return PositionGrid(m.grid.q_min, m.grid.q_max, m.grid.n); }

Wavefunction state_of(const RunManifest& m) {
  if (m.state_spec.empty()) throw Error(ErrorCode::InvalidConfig, "--state is required");
  return build_state(parse_state_spec(m.state_spec, m.constants), grid_of(m));
}

bool record_check(RunManifest& m, std::ostream& out, const std::string& name, double residual,
                  double tolerance) {
  const bool ok = residual <= tolerance;
  m.checks.push_back({name, ok ? "pass" : "fail", residual});
  m.tolerances[name] = tolerance;
  out << name << " " << (ok ? "PASS" : "FAIL") << " residual=" << format_double(residual) << "\n";
  return ok;
}

PhaseSpaceDistribution distribution_of(const std::string& dist, const Wavefunction& psi) {
  if (dist == "wigner") return wigner_from_wavefunction(psi);
  if (dist == "sn") return sn_from_density(density_from_pure(psi));
  throw Error(ErrorCode::InvalidConfig, "--dist must be wigner or sn");
}

int cmd_distribution(RunManifest m, const SharedOptions& shared, const std::string& dist,
                     std::ostream& out) {
  const auto psi = state_of(m);
  const auto p = distribution_of(dist, psi);
  OutputSet files(output_dir(shared), m, out);
  files.write(dist + ".csv", distribution_csv(p));
  const bool ok = record_check(m, out, "normalization", std::abs(normalization(p) - 1.0), 1e-7);
  files.finish();
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_convert(RunManifest m, const SharedOptions& shared, const std::string& in, std::ostream& out) {
  const auto psn = parse_distribution_csv(read_text_file(in));
  if (psn.kind() != DistributionKind::SobutiNasiri) {
    throw Error(ErrorCode::WrongKind, "convert expects a SobutiNasiri distribution");
  }
  const auto& g = psn.qgrid();
  m.grid = {g.q_min(), g.q_max(), g.size()};
  m.constants = psn.constants();
  const auto w = sn_to_wigner(psn);
  OutputSet files(output_dir(shared), m, out);
  files.write("wigner_from_sn.csv", distribution_csv(w));
  bool ok = record_check(m, out, "normalization", std::abs(normalization(w) - 1.0), 1e-7);
  ok = record_check(m, out, "reality", w.max_abs_imag() / w.max_abs(), 1e-9) && ok;
  files.finish();
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_marginals(RunManifest m, const SharedOptions& shared, const std::string& dist, std::ostream& out) {
  const auto psi = state_of(m);
  const auto rho = density_from_pure(psi);
  const auto p = distribution_of(dist, psi);
  const auto qm = position_marginal(p);
  const auto pm = momentum_marginal(p);
  const auto oracle = momentum_density_oracle(rho);
  double q_res = 0.0;
  double p_res = 0.0;
  for (std::size_t j = 0; j < qm.values.size(); ++j) {
    q_res = std::max(q_res, std::abs(qm.values[j] - std::norm(psi.samples()[j])));
    p_res = std::max(p_res, std::abs(pm.values[j] - oracle.values[j]));
  }
  OutputSet files(output_dir(shared), m, out);
  files.write(dist + "_position_marginal.csv", marginal_csv(qm));
  files.write(dist + "_momentum_marginal.csv", marginal_csv(pm));
  bool ok = record_check(m, out, "position_marginal", q_res, kMarginalTolerance);
  ok = record_check(m, out, "momentum_marginal", p_res, kMarginalTolerance) && ok;
  files.finish();
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_expect(RunManifest m, const SharedOptions& shared, const CommandOptions& opts, std::ostream& out) {
  const auto psi = state_of(m);
  const auto& grid = psi.grid();
  const auto& c = m.constants;
  const PolynomialPotential v =
      m.potential.empty() ? harmonic_potential(c.mass, 1.0) : PolynomialPotential(m.potential);
  m.potential = v.coefficients();

  std::optional<WeylSymbol> symbol;
  std::optional<OperatorKernel> kernel;
  if (opts.observable == "q") {
    symbol = builtin_symbol(observable::Position{}, grid, c);
    kernel = position_kernel(grid);
  } else if (opts.observable == "p") {
    symbol = builtin_symbol(observable::Momentum{}, grid, c);
    kernel = momentum_kernel(grid, c);
  } else if (opts.observable == "q2") {
    symbol = builtin_symbol(observable::Potential{PolynomialPotential({0.0, 0.0, 1.0})}, grid, c);
    kernel = position_squared_kernel(grid);
  } else if (opts.observable == "H") {
    symbol = builtin_symbol(observable::Hamiltonian{v}, grid, c);
    kernel = hamiltonian_kernel(grid, c, v);
  } else {
    throw Error(ErrorCode::InvalidConfig, "--observable must be q, p, q2 or H");
  }

  const auto p = distribution_of(opts.dist, psi);
  const Complex value = expect_phase_space(p, *symbol);
  const Complex oracle = expect_operator_oracle(density_from_pure(psi), *kernel);
  const double residual = std::abs(value - oracle);

  nlohmann::json j;
  j["state"] = m.state_spec;
  j["dist"] = opts.dist;
  j["observable"] = opts.observable;
  j["value"] = value.real();
  j["value_imag"] = value.imag();
  j["oracle"] = oracle.real();
  j["oracle_imag"] = oracle.imag();
  j["residual"] = residual;
  j["tolerance"] = kExpectTolerance;
  const std::string text = j.dump(2) + "\n";
  out << text;

  OutputSet files(output_dir(shared), m, out);
  files.write("expect.json", text);
  const bool ok = record_check(m, out, "expectation_vs_trace", residual, kExpectTolerance);
  files.finish();
  return ok ? kExitOk : kExitCheckFailed;
}

std::string snapshot_name(std::size_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "evolve_step_%08zu.csv", step);
  return buf;
}

int cmd_evolve(RunManifest m, const SharedOptions& shared, const CommandOptions& opts, std::ostream& out) {
  if (m.potential.empty()) throw Error(ErrorCode::InvalidConfig, "--potential is required");
  if (m.evolution.steps == 0) throw Error(ErrorCode::InvalidConfig, "--steps must be positive");
  if (opts.log_every == 0) throw Error(ErrorCode::InvalidConfig, "--log-every must be positive");
  const PolynomialPotential v(m.potential);
  const auto psi0 = state_of(m);
  const auto& grid = psi0.grid();
  const auto& c = m.constants;

  EvolutionConfig cfg;
  cfg.dt = m.evolution.dt;
  cfg.steps = m.evolution.steps;
  cfg.truncation = m.evolution.truncation;
  cfg.constants = c;
  cfg.validate();
  m.evolution.truncation = effective_truncation(cfg, v);
  const double radius = wigner_generator_radius(grid, c, v, *m.evolution.truncation);
  if (cfg.dt * radius > cfg.stability_limit) {
    throw Error(ErrorCode::StepTooLarge,
                "dt * spectral radius exceeds the RK4 stability limit; largest stable dt is " +
                    format_double(cfg.stability_limit / radius),
                cfg.dt * radius);
  }

  std::map<std::size_t, PhaseSpaceDistribution> reference;
  if (opts.oracle) {
    evolve_schrodinger_oracle(
        psi0, v, cfg,
        [&](std::size_t step, const Wavefunction& psi) { reference.insert_or_assign(step, wigner_from_wavefunction(psi)); },
        opts.log_every);
  }

  const auto h = builtin_symbol(observable::Hamiltonian{v}, grid, c);
  const auto qs = builtin_symbol(observable::Position{}, grid, c);
  const auto ps = builtin_symbol(observable::Momentum{}, grid, c);
  const auto w0 = wigner_from_wavefunction(psi0);
  const double norm0 = normalization(w0).real();
  const double energy0 = expect_phase_space(w0, h).real();

  std::string log = opts.oracle ? "step,t,normalization,energy,mean_q,mean_p,oracle_linf\n"
                                : "step,t,normalization,energy,mean_q,mean_p\n";
  double norm_rate = 0.0;
  double energy_rate = 0.0;
  double oracle_worst = 0.0;
  auto log_row = [&](std::size_t step, const PhaseSpaceDistribution& w) {
    const double t = static_cast<double>(step) * cfg.dt;
    const double norm = normalization(w).real();
    const double energy = expect_phase_space(w, h).real();
    log += std::to_string(step) + "," + format_double(t) + "," + format_double(norm) + "," +
           format_double(energy) + "," + format_double(expect_phase_space(w, qs).real()) + "," +
           format_double(expect_phase_space(w, ps).real());
    if (opts.oracle) {
      const double d = step == 0 ? 0.0 : (w.values() - reference.at(step).values()).cwiseAbs().maxCoeff();
      oracle_worst = std::max(oracle_worst, d);
      log += "," + format_double(d);
    }
    log += "\n";
    if (step > 0) {
      norm_rate = std::max(norm_rate, std::abs(norm - norm0) / std::abs(norm0) / t);
      energy_rate = std::max(energy_rate, std::abs(energy - energy0) / std::abs(energy0) / t);
    }
  };

  OutputSet files(output_dir(shared), m, out);
  files.write(snapshot_name(0), distribution_csv(w0));
  log_row(0, w0);
  evolve_wigner(w0, v, cfg, [&](std::size_t step, const PhaseSpaceDistribution& w) {
    if (step % opts.log_every == 0 || step == cfg.steps) log_row(step, w);
    if ((opts.snapshot_every > 0 && step % opts.snapshot_every == 0) || step == cfg.steps) {
      files.write(snapshot_name(step), distribution_csv(w));
    }
  });
  files.write("evolve_log.csv", log);

  bool ok = record_check(m, out, "normalization_drift_rate", norm_rate, 1e-6);
  ok = record_check(m, out, "energy_drift_rate", energy_rate, 1e-6) && ok;
  if (opts.oracle) {
    // Reported only: the distance depends on the truncation the user chose.
    m.checks.push_back({"oracle_linf", "pass", oracle_worst});
    out << "oracle_linf " << format_double(oracle_worst) << "\n";
  }
  files.finish();
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(RunManifest m, const SharedOptions& shared, bool quick, std::ostream& out) {
  VerifyOptions options;
  options.grid = grid_of(m);
  options.constants = m.constants;
  options.dynamics = !quick;
  const auto report = run_verify(options);
  const std::string text = report.to_text();
  out << text;
  for (const auto& c : report.checks) {
    m.checks.push_back({c.name, c.passed ? "pass" : "fail", c.residual});
    m.tolerances[c.name] = c.bound;
  }
  OutputSet files(output_dir(shared), m, out);
  files.write("verify_report.txt", text);
  files.finish();
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

void add_shared(CLI::App& app, SharedOptions& s) {
  s.grid_opt = app.add_option("--grid", s.grid, "Position window and size: q_min,q_max,n");
  s.hbar_opt = app.add_option("--hbar", s.hbar, "Reduced Planck constant");
  s.mass_opt = app.add_option("--mass", s.mass, "Particle mass");
  s.out_opt = app.add_option("--out", s.out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
  s.config_opt = app.add_option("--config", s.config, "JSON file with manifest keys used as defaults");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wigner and Sobouti-Nasiri phase-space distributions"};
  app.require_subcommand(1);
  SharedOptions shared;
  add_shared(app, shared);
  app.fallthrough();
  CommandOptions o;

  auto* wigner = app.add_subcommand("wigner", "Wigner distribution CSV of a state");
  o.state_opt = wigner->add_option("--state", o.state, "State spec, e.g. ho:n=1,omega=1");
  auto* sn = app.add_subcommand("sn", "Sobouti-Nasiri distribution CSV of a state");
  sn->add_option("--state", o.state, "State spec");
  auto* convert = app.add_subcommand("convert", "Sobouti-Nasiri CSV to Wigner CSV");
  convert->add_option("--in", o.in, "Sobouti-Nasiri distribution CSV")->required();
  auto* marginals = app.add_subcommand("marginals", "Position and momentum marginals with oracle residuals");
  marginals->add_option("--state", o.state, "State spec");
  marginals->add_option("--dist", o.dist, "wigner or sn")->check(CLI::IsMember({"wigner", "sn"}));
  auto* expect = app.add_subcommand("expect", "Expectation value by phase-space average and by trace");
  expect->add_option("--state", o.state, "State spec");
  expect->add_option("--observable", o.observable, "q, p, q2 or H")
      ->required()
      ->check(CLI::IsMember({"q", "p", "q2", "H"}));
  expect->add_option("--potential", o.potential, "Polynomial coefficients c0,c1,... (default harmonic)");
  expect->add_option("--dist", o.dist, "wigner or sn")->check(CLI::IsMember({"wigner", "sn"}));
  auto* evolve = app.add_subcommand("evolve", "Evolve a Wigner distribution in a polynomial potential");
  evolve->add_option("--state", o.state, "State spec");
  evolve->add_option("--potential", o.potential, "Polynomial coefficients c0,c1,...");
  evolve->add_option("--dt", o.dt, "Time step");
  evolve->add_option("--steps", o.steps, "Number of steps");
  evolve->add_option("--truncation", o.truncation, "Highest series index kept");
  evolve->add_flag("--oracle", o.oracle, "Compare against the split-step Schrodinger reference");
  evolve->add_option("--snapshot-every", o.snapshot_every, "Write a CSV snapshot every k steps (0: first and last only)");
  evolve->add_option("--log-every", o.log_every, "Conserved-quantity log interval in steps");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_flag("--quick", o.quick, "Skip the evolution checks");

  // Options shared between subcommands are bound to the same variables; find
  // the ones of the active subcommand after parsing.
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  auto find = [&](const char* name) -> CLI::Option* {
    try {
      return active->get_option(name);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  };
  o.state_opt = find("--state");
  o.potential_opt = find("--potential");
  o.dt_opt = find("--dt");
  o.steps_opt = find("--steps");
  o.truncation_opt = find("--truncation");

  const std::string name = active->get_name();
  try {
    const RunManifest m = resolve(name, shared, o);
    if (name == "wigner") return cmd_distribution(m, shared, "wigner", out);
    if (name == "sn") return cmd_distribution(m, shared, "sn", out);
    if (name == "convert") return cmd_convert(m, shared, o.in, out);
    if (name == "marginals") return cmd_marginals(m, shared, o.dist, out);
    if (name == "expect") return cmd_expect(m, shared, o, out);
    if (name == "evolve") return cmd_evolve(m, shared, o, out);
    return cmd_verify(m, shared, o.quick, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace phasespace::cli
