#include "phasespace/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "phasespace/error.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidConstants, "hbar must be positive and finite");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidConstants, "mass must be positive and finite");
  }
}

PositionGrid::PositionGrid(double q_min, double q_max, std::size_t n)
    : q_min_(q_min), q_max_(q_max), n_(n), spacing_(0.0) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw Error(ErrorCode::NonPowerOfTwo,
                "grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min)) {
    throw Error(ErrorCode::DegenerateInterval, "grid needs q_max > q_min");
  }
  spacing_ = (q_max - q_min) / static_cast<double>(n);
}

std::vector<double> PositionGrid::points() const {
  std::vector<double> q(n_);
  for (std::size_t j = 0; j < n_; ++j) q[j] = point(j);
  return q;
}

PositionGrid make_position_grid(double q_min, double q_max, std::size_t n) {
  return PositionGrid(q_min, q_max, n);
}

MomentumGrid::MomentumGrid(const PositionGrid& grid, const PhysicalConstants& constants)
    : n_(grid.size()),
      spacing_(2.0 * std::numbers::pi * constants.hbar /
               (static_cast<double>(grid.size()) * grid.spacing())) {
  constants.validate();
}

std::vector<double> MomentumGrid::points() const {
  std::vector<double> p(n_);
  for (std::size_t c = 0; c < n_; ++c) p[c] = point(c);
  return p;
}

MomentumGrid momentum_grid_of(const PositionGrid& grid, const PhysicalConstants& constants) {
  return MomentumGrid(grid, constants);
}

Wavefunction::Wavefunction(PositionGrid grid, std::vector<Complex> samples,
                           PhysicalConstants constants)
    : grid_(grid), samples_(std::move(samples)), constants_(constants) {
  constants_.validate();
  if (samples_.size() != grid_.size()) {
    throw Error(ErrorCode::GridMismatch, "wavefunction has " + std::to_string(samples_.size()) +
                                             " samples for a grid of " +
                                             std::to_string(grid_.size()));
  }
  const double norm_residual = std::abs(norm_squared() - 1.0);
  if (!(norm_residual <= kNormalizationTolerance)) {
    throw Error(ErrorCode::NotNormalized, "wavefunction is not normalized", norm_residual);
  }
  const double edge_q = std::max(std::abs(samples_.front()), std::abs(samples_.back()));
  if (edge_q > kBoundaryDecayTolerance) {
    throw Error(ErrorCode::BoundaryLeak, "state does not decay at the position window edge",
                edge_q);
  }
  const auto phi = to_momentum_representation(*this);
  const double edge_p = std::max(std::abs(phi.front()), std::abs(phi.back()));
  if (edge_p > kBoundaryDecayTolerance) {
    throw Error(ErrorCode::BoundaryLeak, "state does not decay at the momentum window edge",
                edge_p);
  }
}

double Wavefunction::norm_squared() const {
  double sum = 0.0;
  for (const auto& v : samples_) sum += std::norm(v);
  return sum * grid_.spacing();
}

std::vector<Complex> to_momentum_representation(const Wavefunction& psi) {
  const auto& grid = psi.grid();
  const double hbar = psi.constants().hbar;
  const auto pgrid = psi.momentum_grid();
  std::vector<Complex> phi(psi.samples().begin(), psi.samples().end());
  fft::forward(phi);
  fft::swap_halves(std::span<Complex>(phi));
  const double scale = grid.spacing() / std::sqrt(2.0 * std::numbers::pi * hbar);
  for (std::size_t c = 0; c < phi.size(); ++c) {
    phi[c] *= scale * std::polar(1.0, -pgrid.point(c) * grid.q_min() / hbar);
  }
  return phi;
}

std::vector<Complex> from_momentum_representation(const PositionGrid& grid,
                                                  const PhysicalConstants& constants,
                                                  std::span<const Complex> phi) {
  const auto pgrid = momentum_grid_of(grid, constants);
  if (phi.size() != pgrid.size()) {
    throw Error(ErrorCode::GridMismatch, "momentum samples do not match the grid");
  }
  const double hbar = constants.hbar;
  std::vector<Complex> psi(phi.size());
  for (std::size_t c = 0; c < phi.size(); ++c) {
    psi[c] = phi[c] * std::polar(1.0, pgrid.point(c) * grid.q_min() / hbar);
  }
  fft::swap_halves(std::span<Complex>(psi));
  fft::backward(psi);
  const double scale = pgrid.spacing() / std::sqrt(2.0 * std::numbers::pi * hbar);
  for (auto& v : psi) v *= scale;
  return psi;
}

DensityMatrix::DensityMatrix(PositionGrid grid, ComplexMatrix elements, PhysicalConstants constants)
    : grid_(grid), elements_(std::move(elements)), constants_(constants) {
  constants_.validate();
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (elements_.rows() != n || elements_.cols() != n) {
    throw Error(ErrorCode::GridMismatch, "density matrix shape does not match the grid");
  }
  const double herm = hermiticity_residual();
  if (!(herm <= kHermiticityTolerance)) {
    throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian", herm);
  }
  const double trace_residual = std::abs(trace() - 1.0);
  if (!(trace_residual <= kNormalizationTolerance)) {
    throw Error(ErrorCode::NotNormalized, "density matrix trace is not 1", trace_residual);
  }
}

Complex DensityMatrix::trace() const { return elements_.diagonal().sum() * grid_.spacing(); }

double DensityMatrix::hermiticity_residual() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> DensityMatrix::eigenvalues() const {
  const Eigen::MatrixXcd op = elements_ * grid_.spacing();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().front(); }

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Wigner: return "Wigner";
    case DistributionKind::SobutiNasiri: return "SobutiNasiri";
  }
  return "Unknown";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
  if (name == "Wigner") return DistributionKind::Wigner;
  if (name == "SobutiNasiri") return DistributionKind::SobutiNasiri;
  throw Error(ErrorCode::ParseError, "unknown distribution kind '" + std::string(name) + "'");
}

PhaseSpaceDistribution::PhaseSpaceDistribution(DistributionKind kind, PositionGrid qgrid,
                                               PhysicalConstants constants, ComplexMatrix values)
    : kind_(kind),
      qgrid_(qgrid),
      constants_(constants),
      pgrid_(qgrid, constants),
      values_(std::move(values)) {
  const auto n = static_cast<Eigen::Index>(qgrid_.size());
  if (values_.rows() != n || values_.cols() != n) {
    std::ostringstream msg;
    msg << "distribution values are " << values_.rows() << "x" << values_.cols()
        << ", grid expects " << n << "x" << n;
    throw Error(ErrorCode::GridMismatch, msg.str());
  }
}

double PhaseSpaceDistribution::max_abs() const { return values_.cwiseAbs().maxCoeff(); }

double PhaseSpaceDistribution::max_abs_imag() const { return values_.imag().cwiseAbs().maxCoeff(); }

PhaseSpaceDistribution PhaseSpaceDistribution::scaled(Complex factor) const {
  return PhaseSpaceDistribution(kind_, qgrid_, constants_, values_ * factor);
}

}  // namespace phasespace
