#include "phasespace/states.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "phasespace/error.hpp"

namespace phasespace {
namespace {

std::vector<Complex> ho_samples(const HoEigenstate& ho, const PositionGrid& grid,
                                const PhysicalConstants& c) {
  const std::size_t n = grid.size();
  const double alpha = c.mass * ho.omega / c.hbar;
  const double scale = std::sqrt(alpha);
  const double prefactor = std::pow(alpha / std::numbers::pi, 0.25);
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = scale * grid.point(j);
    // Normalized Hermite functions:
    //   h_{k+1} = sqrt(2/(k+1)) xi h_k - sqrt(k/(k+1)) h_{k-1}
    double prev = 0.0;
    double cur = prefactor * std::exp(-0.5 * xi * xi);
    for (std::size_t k = 0; k < ho.level; ++k) {
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * xi * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    out[j] = cur;
  }
  return out;
}

Complex packet(double q, double q0, double p0, double sigma, double hbar) {
  const double d = q - q0;
  const double amp = std::pow(std::numbers::pi * sigma * sigma, -0.25) *
                     std::exp(-d * d / (2.0 * sigma * sigma));
  return std::polar(amp, p0 * d / hbar);
}

void normalize(std::vector<Complex>& samples, double spacing) {
  double sum = 0.0;
  for (const auto& v : samples) sum += std::norm(v);
  const double inv = 1.0 / std::sqrt(sum * spacing);
  for (auto& v : samples) v *= inv;
}

double parse_number(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::InvalidSpec,
                "cannot parse value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void StateSpec::validate() const {
  constants.validate();
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be positive");
    }
  };
  auto finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be finite");
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HoEigenstate>) {
          positive(s.omega, "omega");
        } else {
          finite(s.q0, "q0");
          finite(s.p0, "p0");
          positive(s.sigma, "sigma");
        }
      },
      variant);
}

StateSpec parse_state_spec(std::string_view text, PhysicalConstants constants) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::map<std::string, std::string_view, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(ErrorCode::InvalidSpec, "expected key=value in '" + std::string(item) + "'");
      }
      if (!params.emplace(std::string(item.substr(0, eq)), item.substr(eq + 1)).second) {
        throw Error(ErrorCode::InvalidSpec, "duplicate key in '" + std::string(text) + "'");
      }
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }

  auto take = [&](std::string_view key, double fallback, bool required = false) {
    auto it = params.find(key);
    if (it == params.end()) {
      if (required) {
        throw Error(ErrorCode::InvalidSpec, "missing '" + std::string(key) + "' in '" +
                                                std::string(text) + "'");
      }
      return fallback;
    }
    const double v = parse_number(key, it->second);
    params.erase(it);
    return v;
  };

  StateSpec spec{.variant = HoEigenstate{}, .constants = constants};
  if (name == "ho") {
    const double level = take("n", 0.0, true);
    if (level < 0.0 || level != std::floor(level) || level > 1e6) {
      throw Error(ErrorCode::InvalidSpec, "HO level must be a non-negative integer");
    }
    spec.variant = HoEigenstate{static_cast<std::size_t>(level), take("omega", 1.0)};
  } else if (name == "gauss") {
    spec.variant = GaussianPacket{take("q0", 0.0), take("p0", 0.0), take("sigma", 1.0)};
  } else if (name == "cat") {
    spec.variant = CatState{take("q0", 0.0), take("p0", 0.0), take("sigma", 1.0)};
  } else {
    throw Error(ErrorCode::InvalidSpec, "unknown state '" + std::string(name) +
                                            "' (expected ho, gauss or cat)");
  }
  if (!params.empty()) {
    throw Error(ErrorCode::InvalidSpec, "unknown key '" + params.begin()->first + "' for state '" +
                                            std::string(name) + "'");
  }
  spec.validate();
  return spec;
}

std::string to_string(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HoEigenstate>) {
          return "ho:n=" + std::to_string(s.level) + ",omega=" + format_number(s.omega);
        } else {
          const char* tag = std::is_same_v<T, GaussianPacket> ? "gauss" : "cat";
          return std::string(tag) + ":q0=" + format_number(s.q0) + ",p0=" + format_number(s.p0) +
                 ",sigma=" + format_number(s.sigma);
        }
      },
      spec.variant);
}

Wavefunction build_state(const StateSpec& spec, const PositionGrid& grid) {
  spec.validate();
  const auto& c = spec.constants;
  std::vector<Complex> samples = std::visit(
      [&](const auto& s) -> std::vector<Complex> {
        using T = std::decay_t<decltype(s)>;
        std::vector<Complex> out(grid.size());
        if constexpr (std::is_same_v<T, HoEigenstate>) {
          out = ho_samples(s, grid, c);
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          for (std::size_t j = 0; j < grid.size(); ++j) {
            out[j] = packet(grid.point(j), s.q0, s.p0, s.sigma, c.hbar);
          }
        } else {
          for (std::size_t j = 0; j < grid.size(); ++j) {
            const double q = grid.point(j);
            out[j] = packet(q, s.q0, s.p0, s.sigma, c.hbar) +
                     packet(q, -s.q0, -s.p0, s.sigma, c.hbar);
          }
        }
        return out;
      },
      spec.variant);
  // Also absorbs the cat overlap term and the O(e^-L) quadrature error.
  normalize(samples, grid.spacing());
  return Wavefunction(grid, std::move(samples), c);
}

DensityMatrix density_from_pure(const Wavefunction& psi) {
  const auto s = psi.samples();
  const Eigen::Map<const Eigen::VectorXcd> v(s.data(), static_cast<Eigen::Index>(s.size()));
  ComplexMatrix rho = v * v.adjoint();
  return DensityMatrix(psi.grid(), std::move(rho), psi.constants());
}

DensityMatrix density_mixture(std::span<const double> weights,
                              std::span<const Wavefunction> states) {
  if (weights.size() != states.size() || states.empty()) {
    throw Error(ErrorCode::WeightMismatch, "need one weight per state and at least one state");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::WeightMismatch, "weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::WeightMismatch, "weights must sum to 1", std::abs(total - 1.0));
  }
  const auto& grid = states.front().grid();
  const auto& constants = states.front().constants();
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].grid() == grid) || !(states[i].constants() == constants)) {
      throw Error(ErrorCode::GridMismatch, "mixture states must share one grid and constants");
    }
    const auto s = states[i].samples();
    const Eigen::Map<const Eigen::VectorXcd> v(s.data(), n);
    rho.noalias() += weights[i] * (v * v.adjoint());
  }
  return DensityMatrix(grid, std::move(rho), constants);
}

std::vector<std::string> factory_state_specs() {
  return {
      "ho:n=0,omega=1",
      "ho:n=1,omega=1",
      "ho:n=2,omega=1",
      "ho:n=3,omega=1",
      "ho:n=4,omega=1",
      "gauss:q0=1,p0=0,sigma=1",
      "gauss:q0=-1,p0=1,sigma=0.8",
      "cat:q0=2,p0=0,sigma=0.5",
      "cat:q0=1.5,p0=1,sigma=0.7",
  };
}

}  // namespace phasespace
