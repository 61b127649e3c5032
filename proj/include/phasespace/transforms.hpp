#pragma once

// Wigner and Sobouti-Nasiri distributions on the periodic phase-space grid.
//
// Both are built from "coherence columns" G(j, m), m taken mod n in
// [-n/2, n/2]:
//   Wigner:        G(j, m) = <q_j - m dq/2 | rho | q_j + m dq/2>
//   Sobouti-Nasiri G(j, m) = <q_j | rho | q_j + m dq>
// followed by P(q_j, p_k) = dq/(2 pi hbar) sum_m G(j, m) exp(i p_k m dq / hbar).
// The y = m dq sum runs over one period of the window; the two end points
// m = +-n/2 enter with weight 1/2. Half-integer shifts are spectral.

#include <vector>

#include "phasespace/core.hpp"

namespace phasespace {

enum class MarginalAxis { Position, Momentum };

struct MarginalVector {
  MarginalAxis axis = MarginalAxis::Position;
  std::vector<double> points;
  double spacing = 0.0;
  std::vector<double> values;
  // Largest |Im| dropped when the real part was taken.
  double imaginary_residual = 0.0;

  double total() const;
};

// Sign s of the conversion multiplier exp(s i hbar theta sigma / 2), with
// theta and sigma the synthesis frequencies conjugate to p and q
// (P ~ sum exp(i sigma q + i theta p)). Pinned by the path-equivalence test.
inline constexpr int kSnToWignerSign = -1;

PhaseSpaceDistribution wigner_from_wavefunction(const Wavefunction& psi);
PhaseSpaceDistribution wigner_from_density(const DensityMatrix& rho);
PhaseSpaceDistribution sn_from_density(const DensityMatrix& rho);
PhaseSpaceDistribution sn_to_wigner(const PhaseSpaceDistribution& psn);

MarginalVector momentum_marginal(const PhaseSpaceDistribution& dist);
MarginalVector position_marginal(const PhaseSpaceDistribution& dist);
// <p_k|rho|p_k> by an explicit change of basis, independent of the FFT path.
MarginalVector momentum_density_oracle(const DensityMatrix& rho);

Complex normalization(const PhaseSpaceDistribution& dist);

namespace detail {

// sn_to_wigner with an explicit multiplier sign (+1 or -1).
PhaseSpaceDistribution sn_to_wigner_with_sign(const PhaseSpaceDistribution& psn, int sign);

// Wigner-ordered coherence columns of an arbitrary kernel a(i, j) = <q_i|A|q_j>.
ComplexMatrix centered_coherences(const ComplexMatrix& kernel);
// Inverse of centered_coherences where it is invertible (pseudo-inverse otherwise).
ComplexMatrix kernel_from_centered_coherences(const ComplexMatrix& coherences);

// values(j, c) = prefactor * sum_m G(j, m) exp(2 pi i k m / n), k = c - n/2.
ComplexMatrix phase_space_from_coherences(const ComplexMatrix& coherences, double prefactor);
ComplexMatrix coherences_from_phase_space(const ComplexMatrix& values, double prefactor);

// f(x - shift * spacing) for periodic samples f; Nyquist bin uses the real part
// of the phase so real input stays real.
void spectral_shift(std::span<Complex> samples, double shift_in_samples);

// Band-limited interpolation onto the grid with half the spacing (2n samples).
std::vector<Complex> interpolate_to_half_spacing(std::span<const Complex> samples);

}  // namespace detail

}  // namespace phasespace
