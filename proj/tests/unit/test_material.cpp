#include <doctest.h>

#include "peristab/errors.hpp"
#include "peristab/material.hpp"

using namespace peristab;

TEST_SUITE("material") {
  TEST_CASE("validation") {
    MaterialSpec mat;
    mat.law = LawKind::IsotropicLinear;
    mat.lambda = 1.0;
    mat.mu = 0.0;
    CHECK_THROWS_AS(mat.validate(2, 4), ConfigError);
    mat.mu = 1.0;
    CHECK_NOTHROW(mat.validate(2, 4));
    mat.law = LawKind::Hookean1D;
    CHECK_THROWS_AS(mat.validate(2, 4), ConfigError);
    mat.E_field = {1.0, 2.0};
    CHECK_THROWS_AS(mat.validate(1, 4), ConfigError);
    mat.E_field = {1.0, 2.0, -1.0, 1.0};
    CHECK_THROWS_AS(mat.validate(1, 4), ConfigError);
    mat.E_field = {1.0, 2.0, 3.0, 1.0};
    CHECK_NOTHROW(mat.validate(1, 4));
    CHECK(mat.young(2) == 3.0);
  }

  TEST_CASE("moduli are the derivative of the stress and the stress of the energy") {
    MaterialSpec mat;
    mat.law = LawKind::IsotropicLinear;
    mat.lambda = 0.7;
    mat.mu = 1.3;
    Tensor2 E(3);
    E(0, 0) = 0.01; E(1, 1) = -0.02; E(2, 2) = 0.005; E(0, 2) = E(2, 0) = 0.003;
    const Tensor4 C = stress_moduli(mat, 3);
    const Tensor2 S = stress_generalized(E, mat);
    CHECK(max_abs_diff(S, double_contract(C, E)) <= 1e-15);
    CHECK(strain_energy_density(E, mat) == doctest::Approx(0.5 * double_dot(S, E)).epsilon(1e-14));
  }

  TEST_CASE("hydrostatic law") {
    MaterialSpec mat;
    mat.kappa = 2.0;
    Tensor2 E = Tensor2::identity(2);
    E *= 0.1;
    CHECK(stress_generalized(E, mat)(1, 1) == doctest::Approx(0.2));
  }

  TEST_CASE("stretch powers") {
    for (double m : {0.5, 1.0, 2.0, 0.3, -1.0}) CHECK(stretch_pow(1.21, m) == doctest::Approx(std::pow(1.1, 2.0 * m)).epsilon(1e-15));
  }
}
