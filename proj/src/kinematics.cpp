#include "peristab/kinematics.hpp"

#include <cmath>
#include <string>

#include "peristab/errors.hpp"

namespace peristab {

namespace {

void require_match(std::span<const Bond> family, std::span<const Vec3> Y) {
  if (family.size() != Y.size()) throw ContractViolation("bond and deformed-bond counts differ");
}

double stretch(const Bond& b, const Vec3& y) {
  const double s = norm(y) / b.length;
  if (!(s >= kCollapseRatio)) throw CollapsedBond("bond collapsed (|Y|/|xi| = " + std::to_string(s) + ")");
  return s;
}

}  // namespace

Tensor2 shape_tensor_K(std::span<const Bond> family, int dim) {
  Tensor2 K(dim);
  for (const Bond& b : family) {
    const double c = b.weight * b.dv;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) K(i, j) += c * b.xi[i] * b.xi[j];
  }
  return K;
}

Tensor4 shape_tensor_L(std::span<const Bond> family, int dim) {
  Tensor4 L(dim);
  for (const Bond& b : family) {
    const double c = b.weight * b.dv;
    Vec3 n = (1.0 / b.length) * b.xi;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) L(i, j, k, l) += c * n[i] * n[j] * n[k] * n[l];
  }
  return L;
}

Tensor2 invert_shape_K(const Tensor2& K, double condition_cap) {
  const Eigen::MatrixXd k = K.to_eigen();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || !(sv(0) / sv(sv.size() - 1) <= condition_cap))
    throw SingularShapeTensor("shape tensor K is singular");
  return Tensor2::from_eigen(k.inverse());
}

double weighted_volume(std::span<const Bond> family) {
  double v = 0.0;
  for (const Bond& b : family) v += b.weight * b.dv;
  return v;
}

std::vector<Vec3> deformed_bonds(std::span<const Bond> family, const std::vector<Vec3>& x, int node) {
  std::vector<Vec3> Y;
  Y.reserve(family.size());
  for (const Bond& b : family) Y.push_back(x[b.neighbor] - x[node]);
  return Y;
}

Tensor2 def_grad_bar(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor2& Kinv) {
  require_match(family, Y);
  const int d = Kinv.dim();
  Tensor2 A(d);
  for (std::size_t q = 0; q < family.size(); ++q) {
    const Bond& b = family[q];
    const double c = b.weight * b.dv;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) += c * Y[q][i] * b.xi[j];
  }
  return A * Kinv;
}

namespace {

// sum w g(s) n (x) n dV, contracted with Linv
template <class G>
Tensor2 projected_moment(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor4& Linv, G g) {
  require_match(family, Y);
  const int d = Linv.dim();
  Tensor2 B(d);
  for (std::size_t q = 0; q < family.size(); ++q) {
    const Bond& b = family[q];
    const double c = b.weight * b.dv * g(stretch(b, Y[q])) / (b.length * b.length);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) += c * b.xi[i] * b.xi[j];
  }
  return double_contract(B, Linv);
}

}  // namespace

Tensor2 cauchy_green_bar(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor4& Linv, double m) {
  if (is_log_branch(m)) throw ContractViolation("cauchy_green_bar requires m != 0");
  return projected_moment(family, Y, Linv, [m](double s) { return std::pow(s, 2.0 * m); });
}

Tensor2 seth_hill_strain(std::span<const Bond> family, std::span<const Vec3> Y, const Tensor4& Linv, double m) {
  if (is_log_branch(m)) return projected_moment(family, Y, Linv, [](double s) { return std::log(s); });
  Tensor2 C = cauchy_green_bar(family, Y, Linv, m);
  C -= Tensor2::identity(Linv.dim());
  C *= 1.0 / (2.0 * m);
  return C;
}

ShapeData compute_shapes(const NodeSet& nodes, const FamilyMap& fam) {
  ShapeData sd;
  const std::size_t n = nodes.size();
  sd.K.reserve(n);
  sd.Kinv.reserve(n);
  sd.L.reserve(n);
  sd.Linv.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = fam.of(i);
    if (f.empty()) throw SingularShapeTensor("node " + std::to_string(i) + " has an empty family");
    sd.K.push_back(shape_tensor_K(f, nodes.dim));
    sd.L.push_back(shape_tensor_L(f, nodes.dim));
    try {
      sd.Kinv.push_back(invert_shape_K(sd.K.back()));
      sd.Linv.push_back(invert_sym4(sd.L.back()));
    } catch (const SingularShapeTensor& e) {
      throw SingularShapeTensor("node " + std::to_string(i) + ": " + e.what());
    }
  }
  return sd;
}

}  // namespace peristab
