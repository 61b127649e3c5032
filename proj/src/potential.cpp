#include "phasespace/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "phasespace/error.hpp"

namespace phasespace {

PolynomialPotential::PolynomialPotential(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidSpec, "potential coefficients must be finite");
  }
  while (!coefficients_.empty() && coefficients_.back() == 0.0) coefficients_.pop_back();
  if (degree() > kMaxDegree) {
    throw Error(ErrorCode::InvalidSpec,
                "potential degree " + std::to_string(degree()) + " exceeds the maximum of 8");
  }
}

PolynomialPotential PolynomialPotential::parse(const std::string& text) {
  std::vector<double> coefficients;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidSpec, "cannot parse potential coefficient '" + std::string(item) + "'");
    }
    coefficients.push_back(value);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  return PolynomialPotential(std::move(coefficients));
}

std::size_t PolynomialPotential::degree() const {
  return coefficients_.empty() ? 0 : coefficients_.size() - 1;
}

bool PolynomialPotential::is_zero() const { return coefficients_.empty(); }

double PolynomialPotential::operator()(double q) const {
  double v = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) v = v * q + *it;
  return v;
}

PolynomialPotential PolynomialPotential::derivative(std::size_t order) const {
  std::vector<double> c = coefficients_;
  for (std::size_t o = 0; o < order && !c.empty(); ++o) {
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(d);
  }
  return PolynomialPotential(std::move(c));
}

double PolynomialPotential::max_abs_on(const PositionGrid& grid) const {
  double m = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) m = std::max(m, std::abs((*this)(grid.point(j))));
  return m;
}

std::vector<double> PolynomialPotential::sample(const PositionGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = (*this)(grid.point(j));
  return v;
}

}  // namespace phasespace
