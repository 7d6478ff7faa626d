#pragma once

#include <span>
#include <vector>

#include "peristab/mesh.hpp"
#include "peristab/tensor.hpp"

namespace peristab {

/// |m| below this selects the logarithmic strain.
inline constexpr double kLogBranchTol = 1e-9;
/// |Y|/|xi| below this is a collapsed bond.
inline constexpr double kCollapseRatio = 1e-10;

inline bool is_log_branch(double m) { return std::abs(m) < kLogBranchTol; }

Tensor2 shape_tensor_K(std::span<const Bond> family, int dim);
Tensor4 shape_tensor_L(std::span<const Bond> family, int dim);
/// Throws SingularShapeTensor past the condition cap.
Tensor2 invert_shape_K(const Tensor2& K, double condition_cap = kDefaultConditionCap);
/// sum of w dV over the family.
double weighted_volume(std::span<const Bond> family);

/// Deformed bond vectors x[j] - x[node] in family order.
std::vector<Vec3> deformed_bonds(std::span<const Bond> family, const std::vector<Vec3>& x, int node);

Tensor2 def_grad_bar(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor2& Kinv);
/// Requires m != 0.
Tensor2 cauchy_green_bar(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor4& Linv, double m);
Tensor2 seth_hill_strain(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor4& Linv, double m);

/// Reference-configuration shape data, computed once per node.
struct ShapeData {
  std::vector<Tensor2> K, Kinv;
  std::vector<Tensor4> L, Linv;
};

/// Throws SingularShapeTensor naming the first degenerate node.
ShapeData compute_shapes(const NodeSet& nodes, const FamilyMap& fam);

}  // namespace peristab
