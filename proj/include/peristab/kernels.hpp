#pragma once

#include <vector>

#include "peristab/kinematics.hpp"
#include "peristab/material.hpp"
#include "peristab/mesh.hpp"

namespace peristab {

/// Everything needed to evaluate internal forces on a body.
struct Model {
  NodeSet nodes;
  InfluenceSpec influence;
  FamilyMap families;
  ShapeData shapes;
  MaterialSpec material;

  int dim() const { return nodes.dim; }
  std::size_t size() const { return nodes.size(); }
  /// Reference positions.
  const std::vector<Vec3>& reference() const { return nodes.X; }
};

Model make_model(NodeSet nodes, const InfluenceSpec& infl, MaterialSpec mat);

enum class Exec { Serial, Parallel };

/// Per-node strain: E_(m) for the generalized family, sym(Fbar) - I for Silling.
Tensor2 nodal_strain(const Model& model, const std::vector<Vec3>& x, int node);

/// Per-node tensor entering the bond forces: Linv : S for the generalized
/// family, sigma Kinv for Silling.
Tensor2 nodal_tensor(const Model& model, const std::vector<Vec3>& x, int node);
void nodal_tensors(const Model& model, const std::vector<Vec3>& x, std::vector<Tensor2>& out,
                   Exec exec = Exec::Parallel);

/// f(X_I) = sum_J (T[xi][X_I] - T[-xi][X_J]) dV_J for one node, given nodal_tensors.
Vec3 internal_force_node(const Model& model, const std::vector<Vec3>& x, const std::vector<Tensor2>& nodal,
                         int node);

/// Force density at every node. Two phases (nodal tensors, then bonds).
void internal_force(const Model& model, const std::vector<Vec3>& x, std::vector<Vec3>& f,
                    Exec exec = Exec::Parallel);

inline std::vector<Vec3> internal_force(const Model& model, const std::vector<Vec3>& x,
                                        Exec exec = Exec::Parallel) {
  std::vector<Vec3> f;
  internal_force(model, x, f, exec);
  return f;
}

/// sum_I W(strain_I) dV_I.
double strain_energy(const Model& model, const std::vector<Vec3>& x);

}  // namespace peristab
