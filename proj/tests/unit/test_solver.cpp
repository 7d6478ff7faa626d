#include <doctest.h>

#include "peristab/errors.hpp"
#include "support.hpp"

using namespace peristab;
using namespace peristab::testing;

namespace {

MaterialSpec hookean(double m) {
  MaterialSpec mat;
  mat.m = m;
  mat.law = LawKind::Hookean1D;
  return mat;
}

ProblemSpec stretched_bar(const Model& md, double strain, int layers) {
  ProblemSpec prob;
  prob.model = &md;
  const double L = md.nodes.extent(0);
  for (Side s : {Side::Lower, Side::Upper}) {
    Prescribed bc;
    bc.nodes = boundary_region(md.nodes, 0, s, layers);
    for (int id : bc.nodes) bc.target.push_back({strain * (md.nodes.X[id][0] - 0.5 * L), 0.0, 0.0});
    prob.bcs.push_back(bc);
  }
  return prob;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("apply_bc scales targets and masks components") {
    std::vector<Vec3> u(3, Vec3{9.0, 9.0, 9.0});
    Prescribed bc;
    bc.nodes = {0, 2};
    bc.target = {{1.0, 2.0, 3.0}, {-1.0, -2.0, -3.0}};
    bc.mask = {true, false, true};
    apply_bc(u, {bc}, 0.25);
    CHECK(u[0] == Vec3{0.25, 9.0, 0.75});
    CHECK(u[1] == Vec3{9.0, 9.0, 9.0});
    CHECK(u[2] == Vec3{-0.25, 9.0, -0.75});
    CHECK_THROWS_AS(apply_bc(u, {bc}, 1.5), ContractViolation);
  }

  TEST_CASE("overlapping prescribed sets are rejected") {
    const Model md = bar_model(20, 1.0, 3, hookean(1.0));
    ProblemSpec prob = stretched_bar(md, 0.01, 12);
    CHECK_THROWS_AS(prob.validate(), ConfigError);
  }

  TEST_CASE("unloaded body converges without iterating") {
    const Model md = bar_model(40, 1.0, 3, hookean(1.0));
    const ProblemSpec prob = stretched_bar(md, 0.0, 6);
    const SolveOutcome out = solve_static(prob, 1);
    CHECK(out.converged);
    CHECK(out.total_iterations == 0);
    for (const auto& u : out.u) CHECK(norm(u) == 0.0);
  }

  TEST_CASE("large tension gives a homogeneous stretch") {
    const Model md = bar_model(60, 1.0, 3, hookean(1.0));
    const ProblemSpec prob = stretched_bar(md, 1.0, 6);
    const SolveOutcome out = solve_static(prob, 1);
    REQUIRE(out.converged);
    double dev = 0.0;
    for (std::size_t i = 0; i + 1 < md.size(); ++i)
      dev = std::max(dev, std::abs((out.u[i + 1][0] - out.u[i][0]) / md.nodes.dx - 1.0));
    CHECK(dev <= 1e-8);
  }

  TEST_CASE("Newton and dynamic relaxation agree") {
    const Model md = bar_model(40, 1.0, 3, hookean(0.5));
    ProblemSpec prob = stretched_bar(md, 0.02, 6);
    prob.settings.scheme = "newton";
    const SolveOutcome a = solve_static(prob, 2);
    prob.settings.scheme = "adr";
    prob.settings.tol = 1e-9;
    const SolveOutcome b = solve_static(prob, 2);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (std::size_t i = 0; i < md.size(); ++i) CHECK(std::abs(a.u[i][0] - b.u[i][0]) <= 1e-8);
  }

  TEST_CASE("unknown scheme is a configuration error") {
    const Model md = bar_model(20, 1.0, 3, hookean(1.0));
    ProblemSpec prob = stretched_bar(md, 0.01, 3);
    prob.settings.scheme = "cg";
    CHECK_THROWS_AS(solve_static(prob, 1), ConfigError);
  }

  TEST_CASE("static solves are deterministic") {
    const Model md = bar_model(50, 1.0, 3, hookean(1.0));
    const ProblemSpec prob = stretched_bar(md, -0.0005, 6);
    const SolveOutcome a = solve_static(prob, 3);
    const SolveOutcome b = solve_static(prob, 3);
    CHECK(a.residuals == b.residuals);
    CHECK(a.u == b.u);
  }

  TEST_CASE("explicit dynamics conserves energy") {
    const Model md = bar_model(60, 1.0, 3, hookean(1.0));
    ProblemSpec prob;
    prob.model = &md;
    DynamicOptions opt;
    opt.energy_every = 100;
    opt.u0.resize(md.size());
    for (std::size_t i = 0; i < md.size(); ++i) {
      const double X = md.nodes.X[i][0];
      opt.u0[i] = {1e-3 * std::exp(-200.0 * (X - 0.5) * (X - 0.5)), 0.0, 0.0};
    }
    const double dt = 0.1 * dt_cap(md, 1.0);
    const Trajectory tr = solve_dynamic(prob, dt, 10000, opt);
    REQUIRE(tr.ok);
    const double E0 = tr.kinetic.front() + tr.strain.front();
    REQUIRE(E0 > 0.0);
    for (std::size_t i = 0; i < tr.kinetic.size(); ++i)
      CHECK(std::abs(tr.kinetic[i] + tr.strain[i] - E0) <= 0.01 * E0);
  }

  TEST_CASE("linear and smooth ramps reach the same target") {
    const Model md = bar_model(30, 1.0, 3, hookean(1.0));
    ProblemSpec prob = stretched_bar(md, 0.01, 3);
    for (RampShape shape : {RampShape::Linear, RampShape::Smooth}) {
      DynamicOptions opt;
      opt.ramp_time = 1.0;
      opt.ramp_shape = shape;
      const double dt = 0.2 * dt_cap(md, 1.0);
      const Trajectory tr = solve_dynamic(prob, dt, static_cast<int>(2.0 / dt), opt);
      REQUIRE(tr.ok);
      for (const auto& bc : prob.bcs)
        for (std::size_t q = 0; q < bc.nodes.size(); ++q)
          CHECK(tr.u[bc.nodes[q]][0] == doctest::Approx(bc.target[q][0]).epsilon(1e-12));
    }
  }
}
