#include "phasespace/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {
namespace {

using Index = Eigen::Index;

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

struct MoyalTerm {
  double coefficient;           // (-1)^n (hbar/2)^{2n} / (2n+1)!
  std::size_t order;            // 2n + 1
  std::vector<double> force;    // V^{(2n+1)}(q_j)
};

// Terms whose potential derivative vanishes identically are dropped, so a
// harmonic potential evolves with the n = 0 term only whatever N is.
std::vector<MoyalTerm> moyal_terms(const PositionGrid& grid, const PhysicalConstants& c,
                                   const PolynomialPotential& v, std::size_t truncation) {
  std::vector<MoyalTerm> terms;
  for (std::size_t n = 0; n <= truncation; ++n) {
    const std::size_t order = 2 * n + 1;
    const auto dv = v.derivative(order);
    if (dv.is_zero()) continue;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double coefficient =
        sign * std::pow(0.5 * c.hbar, static_cast<double>(2 * n)) / factorial(order);
    terms.push_back({coefficient, order, dv.sample(grid)});
  }
  return terms;
}

class WignerGenerator {
 public:
  WignerGenerator(const PositionGrid& grid, const PhysicalConstants& c,
                  const PolynomialPotential& v, std::size_t truncation)
      : n_(static_cast<Index>(grid.size())),
        momenta_(momentum_grid_of(grid, c).points()),
        sigma_(fft::angular_frequencies(grid.size(), grid.spacing())),
        theta_(fft::angular_frequencies(grid.size(), momentum_grid_of(grid, c).spacing())),
        inverse_mass_(1.0 / c.mass),
        terms_(moyal_terms(grid, c, v, truncation)) {
    // Odd derivatives have no well-defined value at the Nyquist frequency.
    sigma_[n_ / 2] = 0.0;
    theta_[n_ / 2] = 0.0;
  }

  void apply(const ComplexMatrix& p, ComplexMatrix& out) const {
    const double inv_n = 1.0 / static_cast<double>(n_);

    // Streaming: -(p/m) dP/dq, derivative along rows index (q).
    scratch_ = p;
    fft::forward_cols(scratch_);
    for (Index a = 0; a < n_; ++a) scratch_.row(a) *= Complex(0.0, sigma_[a] * inv_n);
    fft::backward_cols(scratch_);
    for (Index c = 0; c < n_; ++c) out.col(c) = (-momenta_[c] * inverse_mass_) * scratch_.col(c);

    if (terms_.empty()) return;
    // The p axis is stored ascending, a cyclic rotation of FFT order; spectral
    // derivatives commute with that rotation.
    spectrum_ = p;
    fft::forward_rows(spectrum_);
    for (const auto& term : terms_) {
      scratch_ = spectrum_;
      for (Index l = 0; l < n_; ++l) {
        const Complex ik = std::pow(Complex(0.0, theta_[l]), static_cast<int>(term.order)) * inv_n;
        scratch_.col(l) *= ik;
      }
      fft::backward_rows(scratch_);
      for (Index j = 0; j < n_; ++j) {
        out.row(j) += (term.coefficient * term.force[j]) * scratch_.row(j);
      }
    }
  }

 private:
  Index n_;
  std::vector<double> momenta_;
  std::vector<double> sigma_;
  std::vector<double> theta_;
  double inverse_mass_;
  std::vector<MoyalTerm> terms_;
  mutable ComplexMatrix scratch_;
  mutable ComplexMatrix spectrum_;
};

double max_abs_edge_columns(const ComplexMatrix& p) {
  return std::max(p.col(0).cwiseAbs().maxCoeff(), p.col(p.cols() - 1).cwiseAbs().maxCoeff());
}

}  // namespace

void EvolutionConfig::validate() const {
  constants.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  if (steps < 1) throw Error(ErrorCode::InvalidConfig, "steps must be at least 1");
  if (!(stability_limit > 0.0)) throw Error(ErrorCode::InvalidConfig, "stability limit must be positive");
}

std::size_t default_truncation(const PolynomialPotential& v) {
  const std::size_t d = v.degree();
  return d <= 1 ? 0 : (d - 1 + 1) / 2;  // ceil((d - 1) / 2)
}

std::size_t effective_truncation(const EvolutionConfig& cfg, const PolynomialPotential& v) {
  return cfg.truncation.value_or(default_truncation(v));
}

double wigner_generator_radius(const PositionGrid& grid, const PhysicalConstants& constants,
                               const PolynomialPotential& v, std::size_t truncation) {
  const auto pgrid = momentum_grid_of(grid, constants);
  const double sigma_max = std::numbers::pi / grid.spacing();
  const double theta_max = std::numbers::pi / pgrid.spacing();
  double radius = pgrid.max_abs() * sigma_max / constants.mass;
  for (const auto& term : moyal_terms(grid, constants, v, truncation)) {
    double force = 0.0;
    for (double f : term.force) force = std::max(force, std::abs(f));
    radius += std::abs(term.coefficient) * force *
              std::pow(theta_max, static_cast<double>(term.order));
  }
  return radius;
}

ComplexMatrix wigner_rhs(const PhaseSpaceDistribution& dist, const PolynomialPotential& v,
                         const EvolutionConfig& cfg) {
  if (dist.kind() != DistributionKind::Wigner) {
    throw Error(ErrorCode::WrongKind, "the Wigner equation needs a Wigner distribution");
  }
  const WignerGenerator generator(dist.qgrid(), dist.constants(), v, effective_truncation(cfg, v));
  ComplexMatrix out(dist.values().rows(), dist.values().cols());
  generator.apply(dist.values(), out);
  return out;
}

PhaseSpaceDistribution evolve_wigner(const PhaseSpaceDistribution& dist0,
                                     const PolynomialPotential& v, const EvolutionConfig& cfg,
                                     const WignerObserver& observer) {
  cfg.validate();
  if (dist0.kind() != DistributionKind::Wigner) {
    throw Error(ErrorCode::WrongKind, "the Wigner equation needs a Wigner distribution");
  }
  if (!(cfg.constants == dist0.constants())) {
    throw Error(ErrorCode::InvalidConfig, "evolution constants differ from the distribution's");
  }
  const auto& grid = dist0.qgrid();
  const std::size_t truncation = effective_truncation(cfg, v);
  const double radius = wigner_generator_radius(grid, cfg.constants, v, truncation);
  if (cfg.dt * radius > cfg.stability_limit) {
    throw Error(ErrorCode::StepTooLarge,
                "dt * spectral radius exceeds the RK4 stability limit; largest stable dt is " +
                    std::to_string(cfg.stability_limit / radius),
                cfg.dt * radius);
  }

  const WignerGenerator generator(grid, cfg.constants, v, truncation);
  const Index n = static_cast<Index>(grid.size());
  ComplexMatrix state = dist0.values();
  ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), stage(n, n);
  const double dt = cfg.dt;

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    generator.apply(state, k1);
    stage = state + (0.5 * dt) * k1;
    generator.apply(stage, k2);
    stage = state + (0.5 * dt) * k2;
    generator.apply(stage, k3);
    stage = state + dt * k3;
    generator.apply(stage, k4);
    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const bool check = (cfg.boundary_check_interval > 0 && step % cfg.boundary_check_interval == 0) ||
                       step == cfg.steps;
    if (check) {
      const double edge = max_abs_edge_columns(state);
      if (!(edge <= cfg.momentum_boundary_tolerance)) {
        throw Error(ErrorCode::BoundaryLeak,
                    "distribution reached the momentum window edge at step " + std::to_string(step),
                    edge);
      }
    }
    if (observer) observer(step, PhaseSpaceDistribution(DistributionKind::Wigner, grid, cfg.constants, state));
  }
  return PhaseSpaceDistribution(DistributionKind::Wigner, grid, cfg.constants, std::move(state));
}

Wavefunction evolve_schrodinger_oracle(const Wavefunction& psi0, const PolynomialPotential& v,
                                       const EvolutionConfig& cfg,
                                       const WavefunctionObserver& observer,
                                       std::size_t observe_every) {
  cfg.validate();
  if (!(cfg.constants == psi0.constants())) {
    throw Error(ErrorCode::InvalidConfig, "evolution constants differ from the wavefunction's");
  }
  const auto& grid = psi0.grid();
  const auto& c = cfg.constants;
  const std::size_t n = grid.size();
  const auto pgrid = psi0.momentum_grid();

  // Phases per step beyond pi alias on the grid.
  const double kinetic_phase = pgrid.max_abs() * pgrid.max_abs() / (2.0 * c.mass) * cfg.dt / c.hbar;
  const double potential_phase = v.max_abs_on(grid) * cfg.dt / c.hbar;
  if (kinetic_phase > std::numbers::pi || potential_phase > std::numbers::pi) {
    throw Error(ErrorCode::StepTooLarge, "split-step phase per step exceeds pi",
                std::max(kinetic_phase, potential_phase));
  }

  // Strang splitting: half potential, full kinetic, half potential.
  std::vector<Complex> half_potential(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_potential[j] = std::polar(1.0, -0.5 * v(grid.point(j)) * cfg.dt / c.hbar);
  }
  const auto freq = fft::angular_frequencies(n, grid.spacing());
  std::vector<Complex> kinetic(n);
  for (std::size_t a = 0; a < n; ++a) {
    // Same momentum assignment as the grid, Nyquist bin at p = -n/2 dp.
    const double p = c.hbar * (a == n / 2 ? -std::numbers::pi / grid.spacing() : freq[a]);
    kinetic[a] = std::polar(1.0 / static_cast<double>(n), -p * p / (2.0 * c.mass) * cfg.dt / c.hbar);
  }

  std::vector<Complex> psi(psi0.samples().begin(), psi0.samples().end());
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    for (std::size_t j = 0; j < n; ++j) psi[j] *= half_potential[j];
    fft::forward(psi);
    for (std::size_t a = 0; a < n; ++a) psi[a] *= kinetic[a];
    fft::backward(psi);
    for (std::size_t j = 0; j < n; ++j) psi[j] *= half_potential[j];
    if (observer && observe_every > 0 && step % observe_every == 0 && step != cfg.steps) {
      observer(step, Wavefunction(grid, psi, c));
    }
  }
  Wavefunction result(grid, std::move(psi), c);
  if (observer) observer(cfg.steps, result);
  return result;
}

}  // namespace phasespace
