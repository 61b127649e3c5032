#include "phasespace/observables.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fft.hpp"
#include "phasespace/transforms.hpp"

namespace phasespace {
namespace {

using Index = Eigen::Index;

void require_shape(const ComplexMatrix& m, const PositionGrid& grid, const char* what) {
  const auto n = static_cast<Index>(grid.size());
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::GridMismatch, std::string(what) + " shape does not match the grid");
  }
}

// Circulant kernel with eigenvalue f(p) on every grid momentum, divided by dq.
OperatorKernel spectral_kernel(const PositionGrid& grid, const PhysicalConstants& constants,
                               double (*f)(double, const PhysicalConstants&)) {
  const auto n = static_cast<Index>(grid.size());
  const auto pgrid = momentum_grid_of(grid, constants);
  // Eigenvalues in FFT order: natural index a <-> ascending sample (a + n/2) mod n.
  std::vector<Complex> column(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) {
    column[a] = f(pgrid.point(static_cast<std::size_t>((a + n / 2) % n)), constants);
  }
  fft::backward(column);
  ComplexMatrix k(n, n);
  const double scale = 1.0 / (static_cast<double>(n) * grid.spacing());
  // K(i, j) = c[(i - j) mod n]
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) k(i, j) = scale * column[(i - j + n) % n];
  }
  return OperatorKernel(grid, std::move(k));
}

OperatorKernel diagonal_kernel(const PositionGrid& grid, const std::vector<double>& diag) {
  const auto n = static_cast<Index>(grid.size());
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) k(j, j) = diag[j] / grid.spacing();
  return OperatorKernel(grid, std::move(k));
}

}  // namespace

OperatorKernel::OperatorKernel(PositionGrid grid, ComplexMatrix elements)
    : grid_(grid), elements_(std::move(elements)) {
  require_shape(elements_, grid_, "operator kernel");
  if (!elements_.allFinite()) throw Error(ErrorCode::InvalidSpec, "operator kernel has non-finite entries");
}

bool OperatorKernel::is_hermitian(double tolerance) const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff() <= tolerance * std::max(1.0, elements_.cwiseAbs().maxCoeff());
}

WeylSymbol::WeylSymbol(PositionGrid qgrid, PhysicalConstants constants, ComplexMatrix values)
    : qgrid_(qgrid), constants_(constants), pgrid_(qgrid, constants), values_(std::move(values)) {
  require_shape(values_, qgrid_, "Weyl symbol");
}

WeylSymbol weyl_symbol_of_kernel(const OperatorKernel& a, const PhysicalConstants& constants) {
  const auto g = detail::centered_coherences(a.elements());
  return WeylSymbol(a.grid(), constants,
                    detail::phase_space_from_coherences(g, a.grid().spacing()));
}

OperatorKernel kernel_from_symbol(const WeylSymbol& symbol) {
  const auto g = detail::coherences_from_phase_space(symbol.values(), symbol.qgrid().spacing());
  return OperatorKernel(symbol.qgrid(), detail::kernel_from_centered_coherences(g));
}

WeylSymbol builtin_symbol(const BuiltinObservable& name, const PositionGrid& grid,
                          const PhysicalConstants& constants) {
  const auto pgrid = momentum_grid_of(grid, constants);
  const auto n = static_cast<Index>(grid.size());
  const double mass = constants.mass;
  ComplexMatrix values(n, n);
  auto fill = [&](auto&& f) {
    for (Index j = 0; j < n; ++j) {
      const double q = grid.point(static_cast<std::size_t>(j));
      for (Index c = 0; c < n; ++c) values(j, c) = f(q, pgrid.point(static_cast<std::size_t>(c)));
    }
  };
  std::visit(
      [&](const auto& obs) {
        using T = std::decay_t<decltype(obs)>;
        if constexpr (std::is_same_v<T, observable::Position>) {
          fill([](double q, double) { return q; });
        } else if constexpr (std::is_same_v<T, observable::Momentum>) {
          fill([](double, double p) { return p; });
        } else if constexpr (std::is_same_v<T, observable::Kinetic>) {
          fill([mass](double, double p) { return p * p / (2.0 * mass); });
        } else if constexpr (std::is_same_v<T, observable::Potential>) {
          fill([&obs](double q, double) { return obs.v(q); });
        } else {
          fill([&obs, mass](double q, double p) { return p * p / (2.0 * mass) + obs.v(q); });
        }
      },
      name);
  return WeylSymbol(grid, constants, std::move(values));
}

OperatorKernel identity_kernel(const PositionGrid& grid) {
  return diagonal_kernel(grid, std::vector<double>(grid.size(), 1.0));
}

OperatorKernel position_kernel(const PositionGrid& grid) {
  return diagonal_kernel(grid, grid.points());
}

OperatorKernel position_squared_kernel(const PositionGrid& grid) {
  auto q = grid.points();
  for (auto& v : q) v *= v;
  return diagonal_kernel(grid, q);
}

OperatorKernel momentum_kernel(const PositionGrid& grid, const PhysicalConstants& constants) {
  return spectral_kernel(grid, constants, [](double p, const PhysicalConstants&) { return p; });
}

OperatorKernel momentum_squared_kernel(const PositionGrid& grid, const PhysicalConstants& constants) {
  return spectral_kernel(grid, constants, [](double p, const PhysicalConstants&) { return p * p; });
}

OperatorKernel kinetic_kernel(const PositionGrid& grid, const PhysicalConstants& constants) {
  return spectral_kernel(grid, constants,
                         [](double p, const PhysicalConstants& c) { return p * p / (2.0 * c.mass); });
}

OperatorKernel potential_kernel(const PositionGrid& grid, const PolynomialPotential& v) {
  return diagonal_kernel(grid, v.sample(grid));
}

OperatorKernel hamiltonian_kernel(const PositionGrid& grid, const PhysicalConstants& constants,
                                  const PolynomialPotential& v) {
  ComplexMatrix h = kinetic_kernel(grid, constants).elements() + potential_kernel(grid, v).elements();
  return OperatorKernel(grid, std::move(h));
}

OperatorKernel density_kernel(const DensityMatrix& rho) {
  return OperatorKernel(rho.grid(), rho.elements());
}

Complex expect_phase_space(const PhaseSpaceDistribution& dist, const WeylSymbol& symbol) {
  if (!(dist.qgrid() == symbol.qgrid()) || !(dist.pgrid() == symbol.pgrid())) {
    throw Error(ErrorCode::GridMismatch, "distribution and symbol live on different grids");
  }
  return dist.values().cwiseProduct(symbol.values()).sum() * dist.qgrid().spacing() *
         dist.pgrid().spacing();
}

Complex expect_operator_oracle(const DensityMatrix& rho, const OperatorKernel& a) {
  if (!(rho.grid() == a.grid())) {
    throw Error(ErrorCode::GridMismatch, "density and operator live on different grids");
  }
  const double dq = rho.grid().spacing();
  return rho.elements().cwiseProduct(a.elements().transpose()).sum() * dq * dq;
}

}  // namespace phasespace
