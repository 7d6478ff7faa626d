#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "peristab/errors.hpp"
#include "support.hpp"

using namespace peristab;
using namespace peristab::testing;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("Gamma closed form in 1D") {
    const double delta = 2.0, rc = 0.1;
    for (double m : {-1.0, 0.0, 0.5, 1.0, 2.0})
      CHECK(gamma_m(m, 1, InfluenceSpec::step(delta), rc) ==
            doctest::Approx((2.0 * m - 1.0) / delta * (1.0 / rc - 1.0 / delta)).epsilon(1e-10));
  }

  TEST_CASE("Gamma closed form in 2D is linear in m") {
    const double delta = 1.5, rc = 0.01;
    const double V = pi * delta * delta;
    for (double m : {-1.0, 0.0, 0.5, 1.0, 2.0})
      CHECK(gamma_m(m, 2, InfluenceSpec::step(delta), rc) ==
            doctest::Approx(4.0 * pi * m / V * std::log(delta / rc)).epsilon(1e-10).scale(1e3));
    const double g1 = gamma_m(1.0, 2, InfluenceSpec::step(delta), rc);
    CHECK(gamma_m(2.0, 2, InfluenceSpec::step(delta), rc) == doctest::Approx(2.0 * g1).epsilon(1e-12));
  }

  TEST_CASE("Gamma closed form in 3D for step and radial influence") {
    const double delta = 0.8;
    const double V = 4.0 * pi * delta * delta * delta / 3.0;
    for (double m : {-1.0, -0.5, 0.0, 1.0})
      CHECK(gamma_m(m, 3, InfluenceSpec::step(delta), 0.0) ==
            doctest::Approx(4.0 * pi * (2.0 * m + 1.0) / V * delta).epsilon(1e-10).scale(1e3));
    const auto infl = InfluenceSpec::user(delta, [delta](double r) { return 1.0 - r / delta; });
    const double Vw = 4.0 * pi * std::pow(delta, 3) / 12.0;
    CHECK(gamma_m(1.0, 3, infl, 0.0) == doctest::Approx(4.0 * pi * 3.0 / Vw * delta / 2.0).epsilon(1e-10));
  }

  TEST_CASE("critical exponents") {
    CHECK(m_critical(1) == 0.5);
    CHECK(m_critical(2) == 0.0);
    CHECK(std::abs(gamma_m(m_critical(1), 1, InfluenceSpec::step(1.0), 0.1)) <= 1e-12);
    CHECK(std::abs(gamma_m(m_critical(2), 2, InfluenceSpec::step(1.0), 0.1)) <= 1e-12);
    CHECK_THROWS_AS(m_critical(4), ContractViolation);
  }

  TEST_CASE("1D hydrostatic criterion") {
    const double N = 3.0;
    const auto a0 = critical_strain_1d(0.0, N, 0.0, 1.0);
    REQUIRE(a0);
    CHECK(*a0 == doctest::Approx(std::exp(1.0 / 12.0) - 1.0).epsilon(1e-12));
    CHECK(stable_1d(0.0, -0.5, N));
    CHECK(stable_1d(0.5, 10.0, N));
    CHECK(stable_1d(0.5, -0.9, N));
    const auto a1 = critical_strain_1d(1.0, N, -0.99, 0.0);
    REQUIRE(a1);
    const double c = 0.5;
    CHECK(*a1 == doctest::Approx(std::sqrt(c / (1.0 / (4.0 * N) + c)) - 1.0).epsilon(1e-12));
    CHECK_FALSE(critical_strain_1d(0.5, N, -0.5, 0.5));
    CHECK_THROWS_AS(stable_1d(1.0, -1.0, N), ContractViolation);
  }

  TEST_CASE("1D criterion matches the sign of the diagonal entry") {
    for (double m : {-0.5, 0.0, 0.25, 0.75, 1.0, 1.5})
      for (double a = -0.3; a <= 0.3; a += 0.0137) {
        const double d = df1d_analytic(m, a, 3, 1.0, 1.0);
        if (std::abs(d) < 1e-10) continue;
        CHECK(stable_1d(m, a, 3.0) == (d < 0.0));
      }
  }

  TEST_CASE("2D hydrostatic criterion") {
    const double N = 3.0;
    for (double m : {0.5, 1.0, 2.0}) {
      const auto a = critical_strain_2d(m, N, -0.5, 0.0);
      REQUIRE(a);
      CHECK(*a == doctest::Approx(std::pow(1.0 + 1.0 / (2.0 * pi * N), -1.0 / (2.0 * m)) - 1.0).epsilon(1e-12));
    }
    CHECK(*critical_strain_2d(1.0, N, -0.5, 0.0) == doctest::Approx(-0.0255).epsilon(2e-3));
    const auto a0 = critical_strain_2d(0.0, N, -0.5, 0.0);
    REQUIRE(a0);
    CHECK(*a0 == doctest::Approx(std::exp(-1.0 / (2.0 * pi * N)) - 1.0).epsilon(1e-12));
    CHECK(*a0 == doctest::Approx(-0.0517).epsilon(2e-3));
    CHECK(stable_2d(1.0, 0.5, N));
    CHECK_FALSE(stable_2d(-1.0, 0.5, N));
    const Eig2D e = eig_2d_hydro(1.0, 0.01, N, 1.0, 1.0);
    CHECK(e.lambda1 == e.lambda2);
    CHECK(e.lambda1 < 0.0);
  }

  TEST_CASE("region map agrees with the point criteria") {
    for (int dim = 1; dim <= 2; ++dim) {
      const RegionMap map = region_map(dim, 3.0, {-1.0, 2.0}, {-0.2, 0.2}, 13, 17);
      REQUIRE(map.stable.size() == 13);
      REQUIRE(map.stable[0].size() == 17);
      for (int i = 0; i < 13; ++i)
        for (int j = 0; j < 17; ++j) {
          const double m = map.m_samples[i], a = map.a_samples[j];
          CHECK(map.stable[i][j] == (dim == 1 ? stable_1d(m, a, 3.0) : stable_2d(m, a, 3.0)));
        }
      std::ostringstream os;
      write_region_csv(os, map);
      int lines = 0;
      for (char ch : os.str()) lines += ch == '\n';
      CHECK(lines == 1 + 13);
    }
  }

  TEST_CASE("unstrained body is stable for every exponent") {
    for (double m = -2.0; m <= 2.0; m += 0.25) {
      CHECK(stable_1d(m, 0.0, 3.0));
      CHECK(stable_2d(m, 0.0, 3.0));
    }
  }

  TEST_CASE("lattice sums obey the x-y symmetry identities") {
    using P = LatticePattern;
    for (int N : {1, 2, 3, 7, 20}) {
      auto ex = [N](P p) { return lattice_sum(p, N).exact; };
      auto cf = [N](P p) { return lattice_sum(p, N).closed_form; };
      CHECK(ex(P::X1sqR4) == doctest::Approx(ex(P::InvR2) / 2.0).epsilon(1e-14));
      CHECK(ex(P::X1p4R6) + ex(P::X1sqX2sqR6) == doctest::Approx(ex(P::X1sqR4)).epsilon(1e-14));
      CHECK(ex(P::X1p6R8) + ex(P::X1p4X2sqR8) == doctest::Approx(ex(P::X1p4R6)).epsilon(1e-14));
      CHECK(cf(P::X1sqR4) == doctest::Approx(cf(P::InvR2) / 2.0).epsilon(1e-14));
      CHECK(cf(P::X1p4R6) + cf(P::X1sqX2sqR6) == doctest::Approx(cf(P::X1sqR4)).epsilon(1e-14));
      CHECK(cf(P::X1p6R8) + cf(P::X1p4X2sqR8) == doctest::Approx(cf(P::X1p4R6)).epsilon(1e-14));
    }
    CHECK(lattice_sum(P::InvR2, 1).exact == 4.0);
  }

  TEST_CASE("energy test is quadratic in the perturbation") {
    for (int dim = 1; dim <= 2; ++dim)
      for (double m : {0.0, 1.0}) {
        CHECK(silling_test_hydrostatic(m, 0.0, dim, 3, 1.0, 1e-3) == 0.0);
        const double t1 = silling_test_hydrostatic(m, 0.02, dim, 3, 1.0, 1e-4);
        const double t2 = silling_test_hydrostatic(m, 0.02, dim, 3, 1.0, 2e-4);
        CHECK(t1 != 0.0);
        CHECK(t2 == doctest::Approx(4.0 * t1).epsilon(1e-3));
      }
  }

  TEST_CASE("dispersion relation") {
    const int N = 3;
    const auto p0 = dispersion_omega2(0.0, 1e-8, 1.0, N, 1.0, 1.0, 1.0);
    CHECK(std::abs(p0.omega2) <= 1e-12);
    const double k = 1e-3;
    double s = 0.0;
    for (int p = 1; p <= N; ++p) s += 1.0;
    const double c2 = s * s / (N * N);
    CHECK(dispersion_linear(k, N, 1.0, 1.0, 1.0) / (k * k) == doctest::Approx(c2).epsilon(1e-5));
    for (double m : {0.0, 0.5, 1.0}) {
      const auto q = dispersion_omega2(0.7, 1e-8, m, N, 1.0, 1.0, 1.0);
      CHECK(q.omega2 == doctest::Approx(dispersion_linear(0.7, N, 1.0, 1.0, 1.0)).epsilon(1e-6));
      CHECK(std::abs(q.imag) <= 1e-6);
    }
    CHECK(std::abs(dispersion_linear(pi, N, 1.0, 1.0, 1.0)) <= 1e-25);
  }

  TEST_CASE("dispersion zeros detects touches and crossings") {
    std::vector<double> k, w;
    auto f = [](double x) { return (x - 1.0) * (x - 1.0) * (x - 2.5); };
    for (int i = 0; i <= 300; ++i) {
      k.push_back(3.0 * i / 300.0);
      w.push_back(f(k.back()));
    }
    const auto z = dispersion_zeros(k, w, f);
    REQUIRE(z.size() == 2);
    CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(z[1] == doctest::Approx(2.5).epsilon(1e-9));
  }
}
