#include "phasespace/transforms.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {
namespace {

using Index = Eigen::Index;

long signed_index(Index i, Index n) { return static_cast<long>(i < n / 2 ? i : i - n); }

Index wrap(long i, Index n) {
  const long r = i % static_cast<long>(n);
  return static_cast<Index>(r < 0 ? r + n : r);
}

double distribution_prefactor(const PositionGrid& grid, const PhysicalConstants& c) {
  return grid.spacing() / (2.0 * std::numbers::pi * c.hbar);
}

}  // namespace

double MarginalVector::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * spacing;
}

namespace detail {

void spectral_shift(std::span<Complex> samples, double shift_in_samples) {
  const auto n = static_cast<Index>(samples.size());
  fft::forward(samples);
  for (Index a = 0; a < n; ++a) {
    if (a == n / 2) {
      samples[a] *= std::cos(std::numbers::pi * shift_in_samples);
    } else {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(signed_index(a, n)) *
                           shift_in_samples / static_cast<double>(n);
      samples[a] *= std::polar(1.0, phase);
    }
  }
  fft::backward(samples);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : samples) v *= inv;
}

std::vector<Complex> interpolate_to_half_spacing(std::span<const Complex> samples) {
  const auto n = samples.size();
  std::vector<Complex> spectrum(samples.begin(), samples.end());
  fft::forward(spectrum);
  std::vector<Complex> fine(2 * n, Complex{});
  for (std::size_t a = 0; a < n / 2; ++a) fine[a] = spectrum[a];
  for (std::size_t a = n / 2 + 1; a < n; ++a) fine[a + n] = spectrum[a];
  fine[n / 2] = 0.5 * spectrum[n / 2];
  fine[3 * n / 2] = 0.5 * spectrum[n / 2];
  fft::backward(fine);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : fine) v *= inv;
  return fine;
}

ComplexMatrix centered_coherences(const ComplexMatrix& kernel) {
  const Index n = kernel.rows();
  ComplexMatrix g(n, n);
  std::vector<Complex> slice(static_cast<std::size_t>(n));
  for (long m = -n / 2 + 1; m <= n / 2; ++m) {
    // slice[j] = <q_j|A|q_j + m dq>
    for (Index j = 0; j < n; ++j) slice[j] = kernel(j, wrap(j + m, n));
    const Index col = wrap(m, n);
    if (m == n / 2) {
      // m = +n/2 and m = -n/2 share this slice; each end point has weight 1/2.
      const long quarter = n / 4;
      for (Index j = 0; j < n; ++j) {
        g(j, col) = 0.5 * (slice[wrap(j - quarter, n)] + slice[wrap(j + quarter, n)]);
      }
    } else if (m % 2 == 0) {
      for (Index j = 0; j < n; ++j) g(j, col) = slice[wrap(j - m / 2, n)];
    } else {
      spectral_shift(slice, 0.5 * static_cast<double>(m));
      for (Index j = 0; j < n; ++j) g(j, col) = slice[j];
    }
  }
  return g;
}

ComplexMatrix kernel_from_centered_coherences(const ComplexMatrix& coherences) {
  const Index n = coherences.rows();
  ComplexMatrix kernel(n, n);
  std::vector<Complex> slice(static_cast<std::size_t>(n));
  for (long m = -n / 2 + 1; m <= n / 2; ++m) {
    const Index col = wrap(m, n);
    for (Index j = 0; j < n; ++j) slice[j] = coherences(j, col);
    if (m == n / 2) {
      // Undo the average of the +-n/4 shifts: multiplier cos(pi a / 2) in
      // frequency, which is +-1 on even bins and 0 on odd ones.
      fft::forward(slice);
      for (Index a = 0; a < n; ++a) {
        const long s = signed_index(a, n);
        slice[a] *= (s % 2 == 0) ? ((s / 2) % 2 == 0 ? 1.0 : -1.0) : 0.0;
      }
      fft::backward(slice);
      for (auto& v : slice) v /= static_cast<double>(n);
    } else if (m % 2 == 0) {
      std::vector<Complex> shifted(slice.size());
      for (Index j = 0; j < n; ++j) shifted[j] = slice[wrap(j + m / 2, n)];
      slice.swap(shifted);
    } else {
      spectral_shift(slice, -0.5 * static_cast<double>(m));
    }
    for (Index j = 0; j < n; ++j) kernel(j, wrap(j + m, n)) = slice[j];
  }
  return kernel;
}

ComplexMatrix phase_space_from_coherences(const ComplexMatrix& coherences, double prefactor) {
  ComplexMatrix values = coherences;
  fft::backward_rows(values);
  for (Index j = 0; j < values.rows(); ++j) {
    fft::swap_halves(std::span<Complex>(values.row(j).data(), static_cast<std::size_t>(values.cols())));
  }
  values *= prefactor;
  return values;
}

ComplexMatrix coherences_from_phase_space(const ComplexMatrix& values, double prefactor) {
  ComplexMatrix g = values;
  for (Index j = 0; j < g.rows(); ++j) {
    fft::swap_halves(std::span<Complex>(g.row(j).data(), static_cast<std::size_t>(g.cols())));
  }
  fft::forward_rows(g);
  g /= prefactor * static_cast<double>(g.cols());
  return g;
}

PhaseSpaceDistribution sn_to_wigner_with_sign(const PhaseSpaceDistribution& psn, int sign) {
  if (psn.kind() != DistributionKind::SobutiNasiri) {
    throw Error(ErrorCode::WrongKind, "sn_to_wigner expects a SobutiNasiri distribution, got " +
                                          std::string(to_string(psn.kind())));
  }
  const auto& grid = psn.qgrid();
  const auto& constants = psn.constants();
  const double prefactor = distribution_prefactor(grid, constants);
  const Index n = static_cast<Index>(grid.size());

  // Double spectral transform: theta (conjugate to p) along columns, sigma
  // (conjugate to q) along rows.
  ComplexMatrix spectrum = coherences_from_phase_space(psn.values(), prefactor);
  fft::forward_cols(spectrum);

  // hbar * sigma_a * theta_l / 2 = pi * a * l / n with l the coherence offset
  // y = l dq. At the Nyquist frequency of either axis only the real part of
  // the multiplier survives.
  for (Index a = 0; a < n; ++a) {
    const double sa = static_cast<double>(signed_index(a, n));
    for (Index l = 0; l < n; ++l) {
      const double sl = static_cast<double>(signed_index(l, n));
      const double angle = std::numbers::pi * sa * sl / static_cast<double>(n);
      spectrum(a, l) *= (a == n / 2 || l == n / 2)
                            ? Complex(std::cos(angle), 0.0)
                            : std::polar(1.0, static_cast<double>(sign) * angle);
    }
  }

  fft::backward_cols(spectrum);
  spectrum /= static_cast<double>(n);
  return PhaseSpaceDistribution(DistributionKind::Wigner, grid, constants,
                                phase_space_from_coherences(spectrum, prefactor));
}

}  // namespace detail

PhaseSpaceDistribution wigner_from_wavefunction(const Wavefunction& psi) {
  const auto& grid = psi.grid();
  const Index n = static_cast<Index>(grid.size());
  const auto fine = detail::interpolate_to_half_spacing(psi.samples());
  const Index fine_n = 2 * n;

  // f(j, m) = psi*(q_j + m dq/2) psi(q_j - m dq/2)
  auto product = [&](Index j, long m) {
    return std::conj(fine[wrap(2 * j + m, fine_n)]) * fine[wrap(2 * j - m, fine_n)];
  };
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (long m = -n / 2 + 1; m < n / 2; ++m) g(j, wrap(m, n)) = product(j, m);
    g(j, n / 2) = 0.5 * (product(j, n / 2) + product(j, -n / 2));
  }
  return PhaseSpaceDistribution(
      DistributionKind::Wigner, grid, psi.constants(),
      detail::phase_space_from_coherences(g, distribution_prefactor(grid, psi.constants())));
}

PhaseSpaceDistribution wigner_from_density(const DensityMatrix& rho) {
  const auto g = detail::centered_coherences(rho.elements());
  return PhaseSpaceDistribution(
      DistributionKind::Wigner, rho.grid(), rho.constants(),
      detail::phase_space_from_coherences(g, distribution_prefactor(rho.grid(), rho.constants())));
}

PhaseSpaceDistribution sn_from_density(const DensityMatrix& rho) {
  const auto& a = rho.elements();
  const Index n = a.rows();
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index m = 0; m < n; ++m) g(j, m) = a(j, wrap(j + m, n));
  }
  return PhaseSpaceDistribution(
      DistributionKind::SobutiNasiri, rho.grid(), rho.constants(),
      detail::phase_space_from_coherences(g, distribution_prefactor(rho.grid(), rho.constants())));
}

PhaseSpaceDistribution sn_to_wigner(const PhaseSpaceDistribution& psn) {
  return detail::sn_to_wigner_with_sign(psn, kSnToWignerSign);
}

MarginalVector momentum_marginal(const PhaseSpaceDistribution& dist) {
  const auto& v = dist.values();
  MarginalVector out;
  out.axis = MarginalAxis::Momentum;
  out.points = dist.pgrid().points();
  out.spacing = dist.pgrid().spacing();
  out.values.resize(static_cast<std::size_t>(v.cols()));
  const double dq = dist.qgrid().spacing();
  for (Index c = 0; c < v.cols(); ++c) {
    const Complex s = v.col(c).sum() * dq;
    out.values[c] = s.real();
    out.imaginary_residual = std::max(out.imaginary_residual, std::abs(s.imag()));
  }
  return out;
}

MarginalVector position_marginal(const PhaseSpaceDistribution& dist) {
  const auto& v = dist.values();
  MarginalVector out;
  out.axis = MarginalAxis::Position;
  out.points = dist.qgrid().points();
  out.spacing = dist.qgrid().spacing();
  out.values.resize(static_cast<std::size_t>(v.rows()));
  const double dp = dist.pgrid().spacing();
  for (Index j = 0; j < v.rows(); ++j) {
    const Complex s = v.row(j).sum() * dp;
    out.values[j] = s.real();
    out.imaginary_residual = std::max(out.imaginary_residual, std::abs(s.imag()));
  }
  return out;
}

MarginalVector momentum_density_oracle(const DensityMatrix& rho) {
  const auto& grid = rho.grid();
  const auto pgrid = momentum_grid_of(grid, rho.constants());
  const Index n = static_cast<Index>(grid.size());
  const double hbar = rho.constants().hbar;
  const double scale = grid.spacing() / std::sqrt(2.0 * std::numbers::pi * hbar);

  // basis(c, j) = dq <p_c|q_j>
  ComplexMatrix basis(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index j = 0; j < n; ++j) {
      basis(c, j) = scale * std::polar(1.0, -pgrid.point(c) * grid.point(j) / hbar);
    }
  }
  const ComplexMatrix half = basis * rho.elements();
  MarginalVector out;
  out.axis = MarginalAxis::Momentum;
  out.points = pgrid.points();
  out.spacing = pgrid.spacing();
  out.values.resize(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    // Eigen's dot conjugates its left operand: sum_j conj(basis(c,j)) half(c,j).
    const Complex d = basis.row(c).dot(half.row(c));
    out.values[c] = d.real();
    out.imaginary_residual = std::max(out.imaginary_residual, std::abs(d.imag()));
  }
  return out;
}

Complex normalization(const PhaseSpaceDistribution& dist) {
  return dist.values().sum() * dist.qgrid().spacing() * dist.pgrid().spacing();
}

}  // namespace phasespace
