#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "peristab/experiments.hpp"

namespace peristab::testing {

inline Model grid_model(int dim, int span, int N, const MaterialSpec& mat, double dx = 1.0) {
  const double L = span * dx;
  NodeSet ns = build_grid(dim, {L, dim > 1 ? L : 0.0, dim > 2 ? L : 0.0}, dx);
  return make_model(std::move(ns), InfluenceSpec::step(N * dx), mat);
}

inline int center_node(const Model& md) {
  const auto& c = md.nodes.counts;
  return md.nodes.id(c[0] / 2, c[1] / 2, c[2] / 2);
}

inline std::vector<Vec3> affine(const Model& md, const Tensor2& F) {
  std::vector<Vec3> x(md.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = F.apply(md.nodes.X[i]);
  return x;
}

inline Tensor2 random_F(int dim, std::mt19937_64& rng, double amp = 0.3) {
  std::uniform_real_distribution<double> u(-amp, amp);
  while (true) {
    Tensor2 F = Tensor2::identity(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) F(i, j) += u(rng);
    if (F.to_eigen().determinant() > 0.1) return F;
  }
}

inline Tensor2 rotation(int dim, double angle) {
  Tensor2 R = Tensor2::identity(dim);
  if (dim < 2) return R;
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

inline MaterialSpec generalized(int dim, double m) {
  MaterialSpec mat;
  mat.m = m;
  mat.law = dim == 1 ? LawKind::Hookean1D : LawKind::IsotropicLinear;
  mat.lambda = 1.0;
  mat.mu = 1.0;
  return mat;
}

}  // namespace peristab::testing
