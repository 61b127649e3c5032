#pragma once

// Analytic test states with closed-form phase-space distributions.
//
// Canonical text form (used by the CLI):
//   ho:n=2,omega=1
//   gauss:q0=1,p0=0,sigma=1
//   cat:q0=2,p0=0,sigma=0.5

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phasespace/core.hpp"

namespace phasespace {

struct HoEigenstate {
  std::size_t level = 0;
  double omega = 1.0;
  bool operator==(const HoEigenstate&) const = default;
};

// psi(q) = (pi sigma^2)^{-1/4} exp(-(q - q0)^2 / (2 sigma^2) + i p0 (q - q0) / hbar)
struct GaussianPacket {
  double q0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
  bool operator==(const GaussianPacket&) const = default;
};

// Even superposition of the packets centred at (q0, p0) and (-q0, -p0).
struct CatState {
  double q0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
  bool operator==(const CatState&) const = default;
};

struct StateSpec {
  std::variant<HoEigenstate, GaussianPacket, CatState> variant;
  PhysicalConstants constants;

  void validate() const;
  bool operator==(const StateSpec&) const = default;
};

StateSpec parse_state_spec(std::string_view text, PhysicalConstants constants = {});
std::string to_string(const StateSpec& spec);

Wavefunction build_state(const StateSpec& spec, const PositionGrid& grid);

DensityMatrix density_from_pure(const Wavefunction& psi);
DensityMatrix density_mixture(std::span<const double> weights,
                              std::span<const Wavefunction> states);

// The states every invariant is checked on. All fit the default grid (-8, 8, 256)
// with hbar = m = 1.
std::vector<std::string> factory_state_specs();

inline PositionGrid default_grid() { return PositionGrid(-8.0, 8.0, 256); }

}  // namespace phasespace
