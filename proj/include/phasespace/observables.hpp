#pragma once

// Operator kernels, their Weyl symbols, and the two routes to an expectation
// value: phase-space averaging and the trace of rho A.

#include <variant>

#include "phasespace/core.hpp"
#include "phasespace/potential.hpp"

namespace phasespace {

class OperatorKernel {
 public:
  // elements(i, j) = <q_i|A|q_j>; delta(q_i - q_j) is delta_ij / dq.
  OperatorKernel(PositionGrid grid, ComplexMatrix elements);

  const PositionGrid& grid() const { return grid_; }
  const ComplexMatrix& elements() const { return elements_; }
  bool is_hermitian(double tolerance = 1e-12) const;

 private:
  PositionGrid grid_;
  ComplexMatrix elements_;
};

class WeylSymbol {
 public:
  // values(j, c) = A(q_j, p_c), ascending momentum.
  WeylSymbol(PositionGrid qgrid, PhysicalConstants constants, ComplexMatrix values);

  const PositionGrid& qgrid() const { return qgrid_; }
  const MomentumGrid& pgrid() const { return pgrid_; }
  const PhysicalConstants& constants() const { return constants_; }
  const ComplexMatrix& values() const { return values_; }

 private:
  PositionGrid qgrid_;
  PhysicalConstants constants_;
  MomentumGrid pgrid_;
  ComplexMatrix values_;
};

// A(q, p) = sum_y <q - y/2|A|q + y/2> exp(i p y / hbar) dy (no 1/(2 pi hbar)).
WeylSymbol weyl_symbol_of_kernel(const OperatorKernel& a, const PhysicalConstants& constants);
// Inverse Weyl map on the grid. Exact for symbols whose coherence slices carry
// no content at the position Nyquist frequency (e.g. polynomials in q alone or
// in p alone); a least-squares style projection otherwise.
OperatorKernel kernel_from_symbol(const WeylSymbol& symbol);

namespace observable {
struct Position {};
struct Momentum {};
struct Kinetic {};
struct Potential {
  PolynomialPotential v;
};
struct Hamiltonian {
  PolynomialPotential v;
};
}  // namespace observable

using BuiltinObservable = std::variant<observable::Position, observable::Momentum,
                                       observable::Kinetic, observable::Potential,
                                       observable::Hamiltonian>;

// Closed-form symbols q, p, p^2/2m, V(q), p^2/2m + V(q) evaluated on the grid.
WeylSymbol builtin_symbol(const BuiltinObservable& name, const PositionGrid& grid,
                          const PhysicalConstants& constants);

OperatorKernel identity_kernel(const PositionGrid& grid);
OperatorKernel position_kernel(const PositionGrid& grid);
OperatorKernel position_squared_kernel(const PositionGrid& grid);
// Spectral: transform, multiply by p_k (the grid's momenta, Nyquist included), transform back.
OperatorKernel momentum_kernel(const PositionGrid& grid, const PhysicalConstants& constants);
OperatorKernel momentum_squared_kernel(const PositionGrid& grid, const PhysicalConstants& constants);
OperatorKernel kinetic_kernel(const PositionGrid& grid, const PhysicalConstants& constants);
OperatorKernel potential_kernel(const PositionGrid& grid, const PolynomialPotential& v);
OperatorKernel hamiltonian_kernel(const PositionGrid& grid, const PhysicalConstants& constants,
                                  const PolynomialPotential& v);
OperatorKernel density_kernel(const DensityMatrix& rho);

// sum_jc dist(j, c) symbol(j, c) dq dp
Complex expect_phase_space(const PhaseSpaceDistribution& dist, const WeylSymbol& symbol);
// Tr(rho A) = sum_ij rho_ij A_ji dq^2
Complex expect_operator_oracle(const DensityMatrix& rho, const OperatorKernel& a);

}  // namespace phasespace
