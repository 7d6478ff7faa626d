#include <doctest.h>

#include "support.hpp"

using namespace peristab;

TEST_SUITE("experiments") {
  TEST_CASE("singular bar exact solution") {
    const double L = 2.0, alpha = 10.0, E0 = 3.0;
    CHECK(singular_modulus(0.2, L, alpha, E0) == E0);
    CHECK(singular_modulus(1.5, L, alpha, E0) == doctest::Approx(E0 / 11.0));
    const double h = 1e-6;
    for (double x : {0.3, 1.2, 1.5, 1.9}) {
      const double du = L * (singular_u_exact(x + h, L, alpha) - singular_u_exact(x - h, L, alpha)) / (2.0 * h);
      CHECK(du == doctest::Approx(singular_strain_exact(x, L, alpha)).epsilon(1e-7));
      CHECK(singular_strain_exact(x, L, alpha) * singular_modulus(x, L, alpha, E0) == doctest::Approx(E0));
    }
    CHECK(singular_u_exact(0.0, L, alpha) == 0.0);
  }

  TEST_CASE("coarse singular bar run converges") {
    SingularBarParams p;
    p.nodes = 120;
    const SingularBarResult r = run_singular_bar(p);
    REQUIRE(r.outcome.converged);
    CHECK(r.disp_error < 0.2);
    CHECK(r.u_norm.size() == 120);
  }

  TEST_CASE("step-size classification") {
    StepSizeParams p;
    p.nodes = 80;
    const StepRun big = run_step_case(p, 1.0, 1);
    CHECK(big.success());
    const StepRun small = run_step_case(p, -1e-4, 1);
    CHECK(small.success());
  }

  TEST_CASE("roughness of a smooth field is small") {
    NodeSet ns = build_grid(3, {1.0, 1.0, 1.0}, 0.125);
    std::vector<Vec3> u(ns.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = {ns.X[i][0], 0.0, 0.0};
    const Vec3 r = roughness(ns, u);
    CHECK(r[0] <= 1e-15);
    for (std::size_t i = 0; i < u.size(); ++i) u[i][1] = (ns.ijk[i][0] % 2 ? 1e-3 : -1e-3);
    CHECK(roughness(ns, u)[1] > 1e-3);
  }
}
