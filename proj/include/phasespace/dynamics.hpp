#pragma once

// Time evolution of Wigner distributions under the Moyal series for a
// polynomial potential,
//   dP/dt = -(p/m) dP/dq
//           + sum_{n=0}^{N} (-1)^n (hbar/2)^{2n} / (2n+1)! V^{(2n+1)}(q) d^{2n+1}P/dp^{2n+1},
// integrated with fixed-step RK4 and spectral derivatives, plus a split-step
// Schrodinger propagator used as the independent reference.

#include <cstddef>
#include <functional>
#include <optional>

#include "phasespace/core.hpp"
#include "phasespace/potential.hpp"

namespace phasespace {

struct EvolutionConfig {
  double dt = 1e-3;
  std::size_t steps = 1;
  // Highest series index n kept; defaults to ceil((D - 1) / 2) for degree D.
  std::optional<std::size_t> truncation;
  PhysicalConstants constants;

  // RK4 is stable for dt * rho <= 2 sqrt(2) when the generator has a purely
  // imaginary spectrum of radius rho.
  double stability_limit = 2.0 * 1.4142135623730951;
  std::size_t boundary_check_interval = 100;
  double momentum_boundary_tolerance = 1e-7;

  void validate() const;
};

std::size_t default_truncation(const PolynomialPotential& v);
std::size_t effective_truncation(const EvolutionConfig& cfg, const PolynomialPotential& v);

// Upper bound on the spectral radius of the discretized Wigner generator.
double wigner_generator_radius(const PositionGrid& grid, const PhysicalConstants& constants,
                               const PolynomialPotential& v, std::size_t truncation);

ComplexMatrix wigner_rhs(const PhaseSpaceDistribution& dist, const PolynomialPotential& v,
                         const EvolutionConfig& cfg);

// Called after every step with (step index starting at 1, state).
using WignerObserver = std::function<void(std::size_t, const PhaseSpaceDistribution&)>;
using WavefunctionObserver = std::function<void(std::size_t, const Wavefunction&)>;

PhaseSpaceDistribution evolve_wigner(const PhaseSpaceDistribution& dist0,
                                     const PolynomialPotential& v, const EvolutionConfig& cfg,
                                     const WignerObserver& observer = {});

Wavefunction evolve_schrodinger_oracle(const Wavefunction& psi0, const PolynomialPotential& v,
                                       const EvolutionConfig& cfg,
                                       const WavefunctionObserver& observer = {},
                                       std::size_t observe_every = 1);

}  // namespace phasespace
