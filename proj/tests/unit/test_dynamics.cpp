#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phasespace/dynamics.hpp"
#include "phasespace/error.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/transforms.hpp"

using namespace phasespace;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

Wavefunction state(const std::string& spec) { return build_state(parse_state_spec(spec), default_grid()); }

// Wide enough that psi(q + y/2) psi*(q - y/2) vanishes before |y| reaches half the window.
const PositionGrid kWide(-12.0, 12.0, 256);

}  // namespace

TEST(Truncation, DefaultsFromDegree) {
  EXPECT_EQ(default_truncation(harmonic_potential()), 1u);
  EXPECT_EQ(default_truncation(PolynomialPotential({0, 0, 0, 0, 0.1})), 2u);
  EXPECT_EQ(default_truncation(PolynomialPotential({0, 1})), 0u);
  EvolutionConfig cfg;
  cfg.truncation = 0;
  EXPECT_EQ(effective_truncation(cfg, PolynomialPotential({0, 0, 0, 0, 0.1})), 0u);
}

TEST(WignerRhs, StationaryStatesAreFixedPoints) {
  EvolutionConfig cfg;
  for (int n : {0, 2}) {
    const auto w = wigner_from_wavefunction(build_state(parse_state_spec("ho:n=" + std::to_string(n)), kWide));
    EXPECT_LT(wigner_rhs(w, harmonic_potential(), cfg).cwiseAbs().maxCoeff(), 1e-9) << n;
  }
}

TEST(WignerRhs, FreeStreaming) {
  // dW/dt = -(p/m) dW/dq for V = 0
  const auto w = wigner_from_wavefunction(build_state(parse_state_spec("ho:n=0"), kWide));
  EvolutionConfig cfg;
  const auto rhs = wigner_rhs(w, PolynomialPotential(), cfg);
  const auto& g = w.qgrid();
  const auto& pg = w.pgrid();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double q = g.point(j), p = pg.point(c);
      const double expected = p * 2 * q * std::exp(-q * q - p * p) / std::numbers::pi;
      worst = std::max(worst, std::abs(rhs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) - expected));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(EvolveWigner, Guards) {
  const auto w = wigner_from_wavefunction(state("ho:n=0"));
  EvolutionConfig cfg;
  cfg.dt = 0.1;
  cfg.steps = 1;
  EXPECT_EQ(code_of([&] { evolve_wigner(w, harmonic_potential(), cfg); }), ErrorCode::StepTooLarge);
  cfg.dt = 1e-3;
  const auto sn = sn_from_density(density_from_pure(state("ho:n=0")));
  EXPECT_EQ(code_of([&] { evolve_wigner(sn, harmonic_potential(), cfg); }), ErrorCode::WrongKind);
  cfg.constants.hbar = 2.0;
  EXPECT_EQ(code_of([&] { evolve_wigner(w, harmonic_potential(), cfg); }), ErrorCode::InvalidConfig);
  cfg.constants = {};
  cfg.steps = 0;
  EXPECT_EQ(code_of([&] { evolve_wigner(w, harmonic_potential(), cfg); }), ErrorCode::InvalidConfig);
}

TEST(EvolveWigner, MomentumEdgeGuard) {
  // A fast packet pushed by a steep linear force runs off the momentum window.
  const auto w = wigner_from_wavefunction(state("gauss:q0=0,p0=35,sigma=1"));
  EvolutionConfig cfg;
  cfg.dt = 5e-4;
  cfg.steps = 800;
  EXPECT_EQ(code_of([&] { evolve_wigner(w, PolynomialPotential({0.0, -60.0}), cfg); }), ErrorCode::BoundaryLeak);
}

TEST(EvolveWigner, HarmonicMatchesSchrodingerOracle) {
  const auto psi = build_state(parse_state_spec("cat:q0=1.5,p0=1,sigma=0.7"), kWide);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.steps = 200;
  std::size_t calls = 0;
  const auto w = evolve_wigner(wigner_from_wavefunction(psi), harmonic_potential(), cfg,
                               [&](std::size_t, const PhaseSpaceDistribution&) { ++calls; });
  EXPECT_EQ(calls, 200u);
  const auto reference = wigner_from_wavefunction(evolve_schrodinger_oracle(psi, harmonic_potential(), cfg));
  EXPECT_LT((w.values() - reference.values()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(std::abs(normalization(w) - 1.0), 0.0, 1e-10);
}

TEST(SchrodingerOracle, PreservesNormAndObservesEnd) {
  const auto psi = build_state(parse_state_spec("gauss:q0=1,p0=0,sigma=1"), PositionGrid(-12.0, 12.0, 128));
  EvolutionConfig cfg;
  cfg.dt = 1e-2;
  cfg.steps = 157;
  std::vector<std::size_t> seen;
  const auto out = evolve_schrodinger_oracle(
      psi, harmonic_potential(), cfg, [&](std::size_t s, const Wavefunction&) { seen.push_back(s); }, 50);
  EXPECT_EQ(seen, (std::vector<std::size_t>{50, 100, 150, 157}));
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
  // Coherent state after t = 1.57: <q> = cos t
  double mean_q = 0.0;
  for (std::size_t j = 0; j < out.grid().size(); ++j) mean_q += std::norm(out.samples()[j]) * out.grid().point(j) * out.grid().spacing();
  EXPECT_NEAR(mean_q, std::cos(1.57), 1e-4);

  cfg.dt = 1.0;
  EXPECT_EQ(code_of([&] { evolve_schrodinger_oracle(psi, harmonic_potential(), cfg); }), ErrorCode::StepTooLarge);
}
