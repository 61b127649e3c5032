#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phasespace/core.hpp"

namespace phasespace {

// V(q) = sum_k c_k q^k, degree at most 8.
class PolynomialPotential {
 public:
  static constexpr std::size_t kMaxDegree = 8;

  PolynomialPotential() = default;
  explicit PolynomialPotential(std::vector<double> coefficients);

  // Parses "c0,c1,c2,...".
  static PolynomialPotential parse(const std::string& text);

  const std::vector<double>& coefficients() const { return coefficients_; }
  // Degree after trailing zeros are dropped; 0 for the zero polynomial.
  std::size_t degree() const;
  bool is_zero() const;

  double operator()(double q) const;
  PolynomialPotential derivative(std::size_t order = 1) const;
  // max_j |V(q_j)|
  double max_abs_on(const PositionGrid& grid) const;

  std::vector<double> sample(const PositionGrid& grid) const;

  bool operator==(const PolynomialPotential&) const = default;

 private:
  std::vector<double> coefficients_;
};

inline PolynomialPotential harmonic_potential(double mass = 1.0, double omega = 1.0) {
  return PolynomialPotential({0.0, 0.0, 0.5 * mass * omega * omega});
}

}  // namespace phasespace
