#include "phasespace/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "phasespace/dynamics.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/transforms.hpp"

namespace phasespace::cli {

namespace {

using Index = Eigen::Index;

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::Below: return "<";
    case Relation::AtLeast: return ">=";
  }
  return "?";
}

double linf(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> position_density(const DensityMatrix& rho) {
  const auto& e = rho.elements();
  std::vector<double> d(static_cast<std::size_t>(e.rows()));
  for (Index i = 0; i < e.rows(); ++i) d[static_cast<std::size_t>(i)] = e(i, i).real();
  return d;
}

std::vector<Wavefunction> build_all(const std::vector<std::string>& specs, const PositionGrid& grid,
                                    const PhysicalConstants& c) {
  std::vector<Wavefunction> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(build_state(parse_state_spec(s, c), grid));
  return out;
}

DensityMatrix random_mixture(std::mt19937_64& rng, const std::vector<Wavefunction>& states) {
  const auto w = random_weights(rng, states.size());
  return density_mixture(w, states);
}

// (2 pi hbar)^{-1/2} psi(q) conj(phi(p)) exp(-i p q / hbar)
ComplexMatrix sn_closed_form(const Wavefunction& psi) {
  const auto& g = psi.grid();
  const auto pg = psi.momentum_grid();
  const double hbar = psi.constants().hbar;
  const auto phi = to_momentum_representation(psi);
  const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar);
  const auto n = static_cast<Index>(g.size());
  ComplexMatrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    const double q = g.point(static_cast<std::size_t>(j));
    for (Index c = 0; c < n; ++c) {
      const double p = pg.point(static_cast<std::size_t>(c));
      out(j, c) = pref * psi.samples()[static_cast<std::size_t>(j)] *
                  std::conj(phi[static_cast<std::size_t>(c)]) * std::polar(1.0, -p * q / hbar);
    }
  }
  return out;
}

// Relative drift per unit time of normalization and <H>, sampled every
// `every` steps.
class DriftMonitor {
 public:
  DriftMonitor(const PhaseSpaceDistribution& w0, WeylSymbol h, double dt, std::size_t every)
      : h_(std::move(h)), dt_(dt), every_(every) {
    norm0_ = normalization(w0).real();
    energy0_ = expect_phase_space(w0, h_).real();
  }

  void operator()(std::size_t step, const PhaseSpaceDistribution& w) {
    if (step % every_ != 0) return;
    const double t = static_cast<double>(step) * dt_;
    const double dn = std::abs(normalization(w).real() - norm0_) / std::abs(norm0_);
    const double de = std::abs(expect_phase_space(w, h_).real() - energy0_) / std::abs(energy0_);
    norm_rate_ = std::max(norm_rate_, dn / t);
    energy_rate_ = std::max(energy_rate_, de / t);
  }

  double norm_rate() const { return norm_rate_; }
  double energy_rate() const { return energy_rate_; }

 private:
  WeylSymbol h_;
  double dt_;
  std::size_t every_;
  double norm0_ = 0.0;
  double energy0_ = 0.0;
  double norm_rate_ = 0.0;
  double energy_rate_ = 0.0;
};

void append_dynamics(std::vector<CheckResult>& checks, const PositionGrid& grid,
                     const PhysicalConstants& c) {
  double norm_rate = 0.0;
  double energy_rate = 0.0;
  auto track = [&](const DriftMonitor& m) {
    norm_rate = std::max(norm_rate, m.norm_rate());
    energy_rate = std::max(energy_rate, m.energy_rate());
  };

  const auto harmonic = harmonic_potential(c.mass, 1.0);
  const auto h_harmonic = builtin_symbol(observable::Hamiltonian{harmonic}, grid, c);

  {
    const auto w0 = wigner_from_wavefunction(build_state(parse_state_spec("ho:n=0,omega=1", c), grid));
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 1000;
    cfg.constants = c;
    DriftMonitor monitor(w0, h_harmonic, cfg.dt, 100);
    double worst = 0.0;
    evolve_wigner(w0, harmonic, cfg, [&](std::size_t step, const PhaseSpaceDistribution& w) {
      monitor(step, w);
      if (step % 100 == 0) worst = std::max(worst, linf(w.values(), w0.values()));
    });
    track(monitor);
    checks.push_back(make_check("dynamics_ground_state_stationary", worst, Relation::AtMost, 1e-6));
  }

  {
    const auto w0 =
        wigner_from_wavefunction(build_state(parse_state_spec("gauss:q0=1,p0=0,sigma=1", c), grid));
    EvolutionConfig cfg;
    cfg.steps = 1571;
    cfg.dt = 0.5 * std::numbers::pi / static_cast<double>(cfg.steps);
    cfg.constants = c;
    DriftMonitor monitor(w0, h_harmonic, cfg.dt, 100);
    const auto w = evolve_wigner(w0, harmonic, cfg, std::ref(monitor));
    track(monitor);
    const double q = expect_phase_space(w, builtin_symbol(observable::Position{}, grid, c)).real();
    const double p = expect_phase_space(w, builtin_symbol(observable::Momentum{}, grid, c)).real();
    checks.push_back(make_check("dynamics_coherent_mean_q", std::abs(q), Relation::AtMost, 1e-4));
    checks.push_back(make_check("dynamics_coherent_mean_p", std::abs(p + 1.0), Relation::AtMost, 1e-4));
  }

  {
    const PolynomialPotential quartic({0.0, 0.0, 0.0, 0.0, 0.1});
    const auto h_quartic = builtin_symbol(observable::Hamiltonian{quartic}, grid, c);
    const auto psi0 = build_state(parse_state_spec("ho:n=0,omega=1", c), grid);
    const auto w0 = wigner_from_wavefunction(psi0);
    EvolutionConfig cfg;
    cfg.dt = 5e-4;
    cfg.steps = 1000;
    cfg.constants = c;
    const auto reference = wigner_from_wavefunction(evolve_schrodinger_oracle(psi0, quartic, cfg));
    double error[2] = {0.0, 0.0};
    for (std::size_t truncation : {std::size_t{1}, std::size_t{0}}) {
      cfg.truncation = truncation;
      DriftMonitor monitor(w0, h_quartic, cfg.dt, 100);
      const auto w = evolve_wigner(w0, quartic, cfg, std::ref(monitor));
      track(monitor);
      error[truncation] = linf(w.values(), reference.values());
    }
    checks.push_back(make_check("dynamics_quartic_truncation_1", error[1], Relation::AtMost, 1e-3));
    checks.push_back(make_check("dynamics_quartic_truncation_gain", error[1], Relation::Below, error[0]));
  }

  checks.push_back(make_check("conservation_normalization_rate", norm_rate, Relation::AtMost, 1e-6));
  checks.push_back(make_check("conservation_energy_rate", energy_rate, Relation::AtMost, 1e-6));
}

}  // namespace

CheckResult make_check(std::string name, double residual, Relation relation, double bound) {
  bool ok = false;
  switch (relation) {
    case Relation::AtMost: ok = residual <= bound; break;
    case Relation::Below: ok = residual < bound; break;
    case Relation::AtLeast: ok = residual >= bound; break;
  }
  return {std::move(name), residual, relation, bound, ok};
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t count) {
  std::vector<double> w(count);
  double sum = 0.0;
  for (auto& x : w) {
    x = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_text() const {
  std::string out;
  std::size_t passed = 0;
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-36s %s  residual=%.6e %s %.6e\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.residual, relation_symbol(c.relation), c.bound);
    out += buf;
    if (c.passed) ++passed;
  }
  std::snprintf(buf, sizeof buf, "%zu/%zu checks passed\n", passed, checks.size());
  out += buf;
  return out;
}

VerifyReport run_verify(const VerifyOptions& options) {
  const auto& grid = options.grid;
  const auto& c = options.constants;
  std::mt19937_64 rng(options.seed);
  VerifyReport report;
  auto& checks = report.checks;

  const auto specs = factory_state_specs();
  const auto factory = build_all(specs, grid, c);
  std::vector<std::string> ho_specs;
  for (int n = 0; n <= 4; ++n) ho_specs.push_back("ho:n=" + std::to_string(n) + ",omega=1");
  const auto ho = build_all(ho_specs, grid, c);

  std::vector<DensityMatrix> densities;
  for (const auto& psi : factory) densities.push_back(density_from_pure(psi));
  for (int i = 0; i < 5; ++i) densities.push_back(random_mixture(rng, factory));

  double reality = 0.0, wnorm = 0.0, snnorm = 0.0;
  double wpm = 0.0, snpm = 0.0, wqm = 0.0, snqm = 0.0;
  std::vector<PhaseSpaceDistribution> wigners, sns;
  for (std::size_t s = 0; s < densities.size(); ++s) {
    const auto& rho = densities[s];
    auto w = s < factory.size() ? wigner_from_wavefunction(factory[s]) : wigner_from_density(rho);
    auto sn = sn_from_density(rho);
    reality = std::max(reality, w.max_abs_imag() / w.max_abs());
    wnorm = std::max(wnorm, std::abs(normalization(w) - 1.0));
    snnorm = std::max(snnorm, std::abs(normalization(sn) - 1.0));
    const auto pm = momentum_density_oracle(rho).values;
    const auto qm = position_density(rho);
    wpm = std::max(wpm, linf(momentum_marginal(w).values, pm));
    snpm = std::max(snpm, linf(momentum_marginal(sn).values, pm));
    wqm = std::max(wqm, linf(position_marginal(w).values, qm));
    snqm = std::max(snqm, linf(position_marginal(sn).values, qm));
    wigners.push_back(std::move(w));
    sns.push_back(std::move(sn));
  }
  checks.push_back(make_check("wigner_reality", reality, Relation::AtMost, 1e-9));
  checks.push_back(make_check("wigner_normalization", wnorm, Relation::AtMost, 1e-7));
  checks.push_back(make_check("sn_normalization", snnorm, Relation::AtMost, 1e-7));
  checks.push_back(make_check("wigner_momentum_marginal", wpm, Relation::AtMost, 1e-6));
  checks.push_back(make_check("sn_momentum_marginal", snpm, Relation::AtMost, 1e-6));
  checks.push_back(make_check("wigner_position_marginal", wqm, Relation::AtMost, 1e-6));
  checks.push_back(make_check("sn_position_marginal", snqm, Relation::AtMost, 1e-6));

  double path = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto rho = random_mixture(rng, ho);
    path = std::max(path, linf(sn_to_wigner(sn_from_density(rho)).values(), wigner_from_density(rho).values()));
  }
  checks.push_back(make_check("sn_to_wigner_equivalence", path, Relation::AtMost, 1e-8));

  double closed = 0.0;
  for (std::size_t s = 0; s < factory.size(); ++s) {
    closed = std::max(closed, linf(sns[s].values(), sn_closed_form(factory[s])));
  }
  checks.push_back(make_check("sn_closed_form", closed, Relation::AtMost, 1e-9));
  checks.push_back(make_check("sn_ground_state_imaginary_part", sn_from_density(density_from_pure(ho[0])).max_abs_imag(),
                              Relation::AtLeast, 0.01));

  const auto harmonic = harmonic_potential(c.mass, 1.0);
  const std::vector<std::pair<WeylSymbol, OperatorKernel>> observables = {
      {builtin_symbol(observable::Position{}, grid, c), position_kernel(grid)},
      {builtin_symbol(observable::Momentum{}, grid, c), momentum_kernel(grid, c)},
      {builtin_symbol(observable::Potential{PolynomialPotential({0.0, 0.0, 1.0})}, grid, c),
       position_squared_kernel(grid)},
      {builtin_symbol(observable::Hamiltonian{harmonic}, grid, c), hamiltonian_kernel(grid, c, harmonic)},
  };
  double averaging = 0.0;
  for (std::size_t s = 0; s < factory.size(); ++s) {
    for (const auto& [symbol, kernel] : observables) {
      const Complex oracle = expect_operator_oracle(densities[s], kernel);
      averaging = std::max(averaging, std::abs(expect_phase_space(wigners[s], symbol) - oracle));
      averaging = std::max(averaging, std::abs(expect_phase_space(sns[s], symbol) - oracle));
    }
  }
  checks.push_back(make_check("averaging_rule", averaging, Relation::AtMost, 1e-6));

  double energies = 0.0;
  const auto& h_symbol = observables[3].first;
  for (std::size_t n = 0; n < ho.size(); ++n) {
    const Complex e = expect_phase_space(wigner_from_wavefunction(ho[n]), h_symbol);
    energies = std::max(energies, std::abs(e - c.hbar * (static_cast<double>(n) + 0.5)));
  }
  checks.push_back(make_check("oscillator_energies", energies, Relation::AtMost, 1e-6));

  {
    const auto w1 = wigner_from_wavefunction(ho[1]);
    const auto origin_q = static_cast<Index>(std::lround(-grid.q_min() / grid.spacing()));
    const auto origin_p = static_cast<Index>(grid.size() / 2);
    const double value = w1.values()(origin_q, origin_p).real();
    checks.push_back(make_check("wigner_negativity_first_excited", std::abs(value + 1.0 / std::numbers::pi),
                                Relation::AtMost, 1e-6));
  }

  if (options.dynamics) append_dynamics(checks, grid, c);
  return report;
}

}  // namespace phasespace::cli
