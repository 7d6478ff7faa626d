#include <doctest.h>

#include "peristab/errors.hpp"
#include "peristab/mesh.hpp"

using namespace peristab;

TEST_SUITE("mesh") {
  TEST_CASE("grid sizes, volumes and ordering") {
    const NodeSet ns = build_grid(2, {2.0, 1.0, 0.0}, 0.25, 0.1);
    CHECK(ns.size() == 32);
    CHECK(ns.counts[0] == 8);
    CHECK(ns.volume[0] == doctest::Approx(0.1 * 0.0625));
    CHECK(ns.X[1][0] == doctest::Approx(0.375));
    CHECK(ns.id(1, 1) == 9);
    CHECK(ns.X[9][1] == doctest::Approx(0.375));
  }

  TEST_CASE("non-integer extent ratio is a configuration error") {
    CHECK_THROWS_AS(build_grid(1, {1.0, 0.0, 0.0}, 0.3), ConfigError);
  }

  TEST_CASE("1D family of an interior node with N = 3 has 6 members") {
    const NodeSet ns = build_grid(1, {20.0, 0.0, 0.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(3.0));
    CHECK(fam.of(10).size() == 6);
    CHECK(fam.of(0).size() == 3);
    CHECK(fam.full_size() == 6);
  }

  TEST_CASE("2D family of an interior node with N = 3 has 28 members") {
    const NodeSet ns = build_grid(2, {11.0, 11.0, 0.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(3.0));
    CHECK(fam.of(ns.id(5, 5)).size() == 28);
    CHECK(fam.interior(ns.id(5, 5)));
    CHECK_FALSE(fam.interior(ns.id(0, 5)));
  }

  TEST_CASE("lattice offsets are symmetric") {
    for (int dim = 1; dim <= 3; ++dim) {
      const auto offs = lattice_offsets(dim, 9);
      for (const auto& o : offs) {
        bool found = false;
        for (const auto& q : offs) found = found || (q[0] == -o[0] && q[1] == -o[1] && q[2] == -o[2]);
        CHECK(found);
      }
    }
    CHECK(lattice_offsets(3, 9).size() == 122);
  }

  TEST_CASE("family members hold exact bond vectors") {
    const NodeSet ns = build_grid(2, {9.0, 9.0, 0.0}, 0.5);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(1.5));
    for (const auto& b : fam.of(ns.id(4, 4))) {
      const Vec3 d = ns.X[b.neighbor] - ns.X[ns.id(4, 4)];
      CHECK(b.xi[0] == doctest::Approx(d[0]).epsilon(1e-14));
      CHECK(b.xi[1] == doctest::Approx(d[1]).epsilon(1e-14));
      CHECK(b.length <= 1.5 + 1e-12);
    }
  }

  TEST_CASE("horizon below the grid spacing is rejected") {
    const NodeSet ns = build_grid(1, {4.0, 0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(build_families(ns, InfluenceSpec::step(0.5)), ContractViolation);
  }

  TEST_CASE("user influence function weights bonds") {
    const NodeSet ns = build_grid(1, {10.0, 0.0, 0.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::user(3.0, [](double r) { return 1.0 / r; }));
    for (const auto& b : fam.of(5)) CHECK(b.weight == doctest::Approx(1.0 / b.length));
  }

  TEST_CASE("boundary regions") {
    const NodeSet ns = build_grid(1, {20.0, 0.0, 0.0}, 1.0);
    CHECK(boundary_region(ns, 0, Side::Lower, 6) == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(boundary_region(ns, 0, Side::Upper, 2) == std::vector<int>{18, 19});
    const NodeSet sq = build_grid(2, {4.0, 4.0, 0.0}, 1.0);
    CHECK(boundary_region(sq, 0, Side::Lower, 1).size() == 4);
    CHECK_THROWS_AS(boundary_region(ns, 0, Side::Lower, 0), ConfigError);
    CHECK_THROWS_AS(boundary_region(ns, 0, Side::Lower, 21), ConfigError);
  }
}
