#pragma once

// Grids, physical constants and the state containers shared by every module.
//
// Conventions
//   * Position grid is periodic: q_j = q_min + j dq, j = 0..n-1, q_max excluded.
//   * Momentum grid is the spectral partner: p_k = k dp for k = -n/2..n/2-1,
//     stored ascending, with dp * dq * n = 2 pi hbar.
//   * <q|p> = (2 pi hbar)^{-1/2} exp(i p q / hbar); the discrete transform is
//     phi(p_k) = dq (2 pi hbar)^{-1/2} sum_j exp(-i p_k q_j / hbar) psi(q_j).
//   * delta(q_i - q_j) on the grid is delta_ij / dq, so kernels <q_i|A|q_j>
//     carry a 1/dq and traces carry dq per index.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace phasespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// States must decay below this at both ends of the position window and of the
// momentum window.
inline constexpr double kBoundaryDecayTolerance = 1e-9;
inline constexpr double kNormalizationTolerance = 1e-9;
inline constexpr double kHermiticityTolerance = 1e-12;

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
  bool operator==(const PhysicalConstants&) const = default;
};

class PositionGrid {
 public:
  PositionGrid(double q_min, double q_max, std::size_t n);

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  double length() const { return q_max_ - q_min_; }
  double point(std::size_t j) const { return q_min_ + static_cast<double>(j) * spacing_; }
  std::vector<double> points() const;

  bool operator==(const PositionGrid&) const = default;

 private:
  double q_min_;
  double q_max_;
  std::size_t n_;
  double spacing_;
};

PositionGrid make_position_grid(double q_min, double q_max, std::size_t n);

class MomentumGrid {
 public:
  MomentumGrid(const PositionGrid& grid, const PhysicalConstants& constants);

  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  // Sample c in ascending order, p = (c - n/2) dp.
  double point(std::size_t c) const {
    return (static_cast<double>(c) - static_cast<double>(n_ / 2)) * spacing_;
  }
  std::vector<double> points() const;
  // Largest |p| on the grid, n/2 dp.
  double max_abs() const { return static_cast<double>(n_ / 2) * spacing_; }

  bool operator==(const MomentumGrid&) const = default;

 private:
  std::size_t n_;
  double spacing_;
};

MomentumGrid momentum_grid_of(const PositionGrid& grid, const PhysicalConstants& constants);

class Wavefunction {
 public:
  // Validates normalization and decay at the position and momentum window edges
  // (throws NotNormalized / BoundaryLeak).
  Wavefunction(PositionGrid grid, std::vector<Complex> samples, PhysicalConstants constants = {});

  const PositionGrid& grid() const { return grid_; }
  const PhysicalConstants& constants() const { return constants_; }
  std::span<const Complex> samples() const { return samples_; }
  MomentumGrid momentum_grid() const { return momentum_grid_of(grid_, constants_); }

  // sum_j |psi_j|^2 dq
  double norm_squared() const;

 private:
  PositionGrid grid_;
  std::vector<Complex> samples_;
  PhysicalConstants constants_;
};

// phi(p_k) on the momentum grid, ascending p.
std::vector<Complex> to_momentum_representation(const Wavefunction& psi);
// Inverse of to_momentum_representation for samples on momentum_grid_of(grid, constants).
std::vector<Complex> from_momentum_representation(const PositionGrid& grid,
                                                  const PhysicalConstants& constants,
                                                  std::span<const Complex> phi);

class DensityMatrix {
 public:
  // elements(i, j) = <q_i|rho|q_j>. Checks Hermiticity and unit trace.
  DensityMatrix(PositionGrid grid, ComplexMatrix elements, PhysicalConstants constants = {});

  const PositionGrid& grid() const { return grid_; }
  const PhysicalConstants& constants() const { return constants_; }
  const ComplexMatrix& elements() const { return elements_; }

  Complex trace() const;
  double hermiticity_residual() const;
  // Eigenvalues of the operator (rho dq in the orthonormal grid basis), ascending.
  std::vector<double> eigenvalues() const;
  double min_eigenvalue() const;

 private:
  PositionGrid grid_;
  ComplexMatrix elements_;
  PhysicalConstants constants_;
};

enum class DistributionKind { Wigner, SobutiNasiri };

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(std::string_view name);

class PhaseSpaceDistribution {
 public:
  // values(j, c): row j is q_j, column c is the ascending momentum sample p_c.
  PhaseSpaceDistribution(DistributionKind kind, PositionGrid qgrid, PhysicalConstants constants,
                         ComplexMatrix values);

  DistributionKind kind() const { return kind_; }
  const PositionGrid& qgrid() const { return qgrid_; }
  const MomentumGrid& pgrid() const { return pgrid_; }
  const PhysicalConstants& constants() const { return constants_; }
  const ComplexMatrix& values() const { return values_; }

  double max_abs() const;
  double max_abs_imag() const;
  PhaseSpaceDistribution scaled(Complex factor) const;

 private:
  DistributionKind kind_;
  PositionGrid qgrid_;
  PhysicalConstants constants_;
  MomentumGrid pgrid_;
  ComplexMatrix values_;
};

}  // namespace phasespace
