#include <gtest/gtest.h>

#include <cmath>

#include "phasespace/error.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/transforms.hpp"

using namespace phasespace;

namespace {

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Wavefunction state(const std::string& spec) { return build_state(parse_state_spec(spec), default_grid()); }

}  // namespace

TEST(WeylSymbol, OfBuiltinKernels) {
  const auto g = default_grid();
  const PhysicalConstants c;
  EXPECT_LT(max_diff(weyl_symbol_of_kernel(position_kernel(g), c).values(),
                     builtin_symbol(observable::Position{}, g, c).values()),
            1e-12);
  EXPECT_LT(max_diff(weyl_symbol_of_kernel(momentum_kernel(g, c), c).values(),
                     builtin_symbol(observable::Momentum{}, g, c).values()),
            1e-10);
  EXPECT_LT(max_diff(weyl_symbol_of_kernel(kinetic_kernel(g, c), c).values(),
                     builtin_symbol(observable::Kinetic{}, g, c).values()),
            1e-9);
  const PolynomialPotential v({0.0, 0.5, 0.0, -0.25});
  EXPECT_LT(max_diff(weyl_symbol_of_kernel(potential_kernel(g, v), c).values(),
                     builtin_symbol(observable::Potential{v}, g, c).values()),
            1e-10);
}

TEST(WeylSymbol, InverseRecoversKernels) {
  const auto g = default_grid();
  const PhysicalConstants c;
  for (const auto& k : {position_kernel(g), momentum_kernel(g, c), position_squared_kernel(g)}) {
    const auto back = kernel_from_symbol(weyl_symbol_of_kernel(k, c));
    EXPECT_LT(max_diff(back.elements(), k.elements()), 1e-9 * k.elements().cwiseAbs().maxCoeff());
    EXPECT_TRUE(back.is_hermitian(1e-10));
  }
}

TEST(Kernels, AreHermitian) {
  const auto g = default_grid();
  const PhysicalConstants c;
  EXPECT_TRUE(momentum_kernel(g, c).is_hermitian());
  EXPECT_TRUE(hamiltonian_kernel(g, c, harmonic_potential()).is_hermitian());
  EXPECT_TRUE(identity_kernel(g).is_hermitian());
}

TEST(Expectation, PhaseSpaceMatchesTrace) {
  const auto g = default_grid();
  const PhysicalConstants c;
  const auto v = harmonic_potential();
  for (const auto& spec : factory_state_specs()) {
    const auto psi = state(spec);
    const auto rho = density_from_pure(psi);
    const auto w = wigner_from_wavefunction(psi);
    const auto sn = sn_from_density(rho);
    EXPECT_NEAR(std::abs(expect_operator_oracle(rho, identity_kernel(g)) - 1.0), 0.0, 1e-12);
    for (const auto& [sym, ker] :
         {std::pair{builtin_symbol(observable::Position{}, g, c), position_kernel(g)},
          std::pair{builtin_symbol(observable::Momentum{}, g, c), momentum_kernel(g, c)},
          std::pair{builtin_symbol(observable::Hamiltonian{v}, g, c), hamiltonian_kernel(g, c, v)}}) {
      const Complex oracle = expect_operator_oracle(rho, ker);
      EXPECT_NEAR(std::abs(expect_phase_space(w, sym) - oracle), 0.0, 1e-9) << spec;
      EXPECT_NEAR(std::abs(expect_phase_space(sn, sym) - oracle), 0.0, 1e-9) << spec;
    }
  }
}

TEST(Expectation, CoherentPacketMeans) {
  const auto g = default_grid();
  const PhysicalConstants c;
  const auto w = wigner_from_wavefunction(state("gauss:q0=-1,p0=1,sigma=0.8"));
  EXPECT_NEAR(expect_phase_space(w, builtin_symbol(observable::Position{}, g, c)).real(), -1.0, 1e-12);
  EXPECT_NEAR(expect_phase_space(w, builtin_symbol(observable::Momentum{}, g, c)).real(), 1.0, 1e-12);
  // <q^2> = q0^2 + sigma^2 / 2
  EXPECT_NEAR(expect_phase_space(w, builtin_symbol(observable::Potential{PolynomialPotential({0, 0, 1})}, g, c)).real(),
              1.0 + 0.32, 1e-12);
}

TEST(Expectation, GridMismatchIsRejected) {
  const auto w = wigner_from_wavefunction(state("ho:n=0"));
  const PositionGrid other(-8, 8, 128);
  EXPECT_THROW(expect_phase_space(w, builtin_symbol(observable::Position{}, other, {})), Error);
  EXPECT_THROW(expect_operator_oracle(density_from_pure(state("ho:n=0")), position_kernel(other)), Error);
}

TEST(Potential, ParseAndDerivatives) {
  const auto v = PolynomialPotential::parse("1,0,0.5,0,0.1");
  EXPECT_EQ(v.degree(), 4u);
  EXPECT_DOUBLE_EQ(v(2.0), 1 + 2 + 1.6);
  const auto d3 = v.derivative(3);
  ASSERT_EQ(d3.degree(), 1u);
  EXPECT_NEAR(d3.coefficients()[1], 2.4, 1e-14);
  EXPECT_TRUE(v.derivative(5).is_zero());
  EXPECT_EQ(PolynomialPotential::parse("0,0,0.5,0,0").degree(), 2u);
  EXPECT_THROW(PolynomialPotential::parse("1,x"), Error);
  EXPECT_THROW(PolynomialPotential(std::vector<double>(10, 1.0)), Error);
}
