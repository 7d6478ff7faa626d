#include <doctest.h>

#include <random>

#include "peristab/errors.hpp"
#include "support.hpp"

using namespace peristab;
using namespace peristab::testing;

namespace {

Tensor2 local_seth_hill(const Tensor2& F, double m) {
  const int d = F.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((F.transpose() * F).to_eigen());
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < d; ++i) ev(i) = std::abs(m) < 1e-12 ? 0.5 * std::log(ev(i)) : (std::pow(ev(i), m) - 1.0) / (2.0 * m);
  return Tensor2::from_eigen(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace

TEST_SUITE("kinematics") {
  TEST_CASE("1D shape tensors for N = 3") {
    const double A = 0.7, dx = 0.2;
    const NodeSet ns = build_grid(1, {20 * dx, 0.0, 0.0}, dx, A);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(3 * dx));
    const auto f = fam.of(10);
    CHECK(shape_tensor_K(f, 1)(0, 0) == doctest::Approx(28.0 * A * dx * dx * dx).epsilon(1e-13));
    CHECK(shape_tensor_L(f, 1)(0, 0, 0, 0) == doctest::Approx(2.0 * A * 3 * dx).epsilon(1e-13));
    CHECK(weighted_volume(f) == doctest::Approx(6.0 * A * dx).epsilon(1e-13));
  }

  TEST_CASE("shape tensor L is fully symmetric") {
    const NodeSet ns = build_grid(3, {7.0, 7.0, 7.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(2.0));
    const Tensor4 L = shape_tensor_L(fam.of(ns.id(3, 3, 3)), 3);
    CHECK(L.is_fully_symmetric(1e-14));
  }

  TEST_CASE("interior 2D L matches its isotropic lattice limit") {
    const NodeSet ns = build_grid(2, {41.0, 41.0, 0.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(20.0));
    const Tensor4 L = shape_tensor_L(fam.of(ns.id(20, 20)), 2);
    const double V = weighted_volume(fam.of(ns.id(20, 20)));
    CHECK(L(0, 0, 0, 0) / V == doctest::Approx(3.0 / 8.0).epsilon(2e-3));
    CHECK(L(0, 0, 1, 1) / V == doctest::Approx(1.0 / 8.0).epsilon(5e-3));
  }

  TEST_CASE("collinear family has a singular K") {
    NodeSet ns = build_grid(2, {5.0, 1.0, 0.0}, 1.0);
    const FamilyMap fam = build_families(ns, InfluenceSpec::step(1.0));
    CHECK_THROWS_AS(compute_shapes(ns, fam), SingularShapeTensor);
  }

  TEST_CASE("affine states are reproduced at m = 1 and for hydrostatic states at any m") {
    std::mt19937_64 rng(7);
    for (int dim = 1; dim <= 3; ++dim) {
      const Model md = grid_model(dim, dim == 3 ? 5 : 9, 2, generalized(dim, 1.0));
      const int c = center_node(md);
      for (int t = 0; t < 5; ++t) {
        const Tensor2 F = random_F(dim, rng);
        const auto x = affine(md, F);
        const auto Y = deformed_bonds(md.families.of(c), x, c);
        CHECK(max_abs_diff(def_grad_bar(md.families.of(c), Y, md.shapes.Kinv[c]), F) <= 1e-13);
        CHECK(max_abs_diff(seth_hill_strain(md.families.of(c), Y, md.shapes.Linv[c], 1.0), local_seth_hill(F, 1.0)) <=
              1e-13);
      }
      for (double m : {-0.5, 0.0, 0.5, 2.0}) {
        Tensor2 F = Tensor2::identity(dim);
        F *= 1.07;
        const auto x = affine(md, F);
        const auto Y = deformed_bonds(md.families.of(c), x, c);
        CHECK(max_abs_diff(seth_hill_strain(md.families.of(c), Y, md.shapes.Linv[c], m), local_seth_hill(F, m)) <=
              1e-13);
      }
    }
  }

  TEST_CASE("strain is continuous in m through the logarithmic branch") {
    std::mt19937_64 rng(11);
    const Model md = grid_model(2, 9, 2, generalized(2, 0.0));
    const int c = center_node(md);
    const auto Y = deformed_bonds(md.families.of(c), affine(md, random_F(2, rng)), c);
    const auto f = md.families.of(c);
    const Tensor2 E0 = seth_hill_strain(f, Y, md.shapes.Linv[c], 0.0);
    for (double m : {1e-4, -1e-4, 1e-6}) {
      const Tensor2 Em = seth_hill_strain(f, Y, md.shapes.Linv[c], m);
      CHECK(max_abs_diff(Em, E0) <= 10.0 * std::abs(m));
    }
  }

  TEST_CASE("strain is invariant under rigid rotation") {
    std::mt19937_64 rng(5);
    const Model md = grid_model(2, 9, 2, generalized(2, 0.5));
    const int c = center_node(md);
    const auto f = md.families.of(c);
    auto x = affine(md, random_F(2, rng));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.01 * Vec3{std::sin(3.0 * i), std::cos(5.0 * i), 0.0};
    const Tensor2 R = rotation(2, 0.83);
    std::vector<Vec3> xr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xr[i] = R.apply(x[i]);
    for (double m : {0.0, 0.5, 1.0, -1.0})
      CHECK(max_abs_diff(seth_hill_strain(f, deformed_bonds(f, x, c), md.shapes.Linv[c], m),
                         seth_hill_strain(f, deformed_bonds(f, xr, c), md.shapes.Linv[c], m)) <= 1e-13);
  }

  TEST_CASE("collapsed bond is reported") {
    const Model md = grid_model(1, 9, 2, generalized(1, 1.0));
    auto x = md.nodes.X;
    x[5] = x[4];
    const auto f = md.families.of(4);
    CHECK_THROWS_AS(seth_hill_strain(f, deformed_bonds(f, x, 4), md.shapes.Linv[4], 1.0), CollapsedBond);
  }
}
