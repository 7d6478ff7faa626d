#include "peristab/kernels.hpp"

#include <exception>
#include <mutex>

#include "peristab/errors.hpp"

namespace peristab {

Model make_model(NodeSet nodes, const InfluenceSpec& infl, MaterialSpec mat) {
  mat.validate(nodes.dim, nodes.size());
  Model md;
  md.families = build_families(nodes, infl);
  md.shapes = compute_shapes(nodes, md.families);
  md.nodes = std::move(nodes);
  md.influence = infl;
  md.material = std::move(mat);
  return md;
}

namespace {

Tensor2 generalized_strain(const Model& md, const std::vector<Vec3>& x, int node) {
  const int d = md.dim();
  const double m = md.material.m;
  const bool log_branch = is_log_branch(m);
  Tensor2 B(d);
  const Vec3& xi0 = x[node];
  for (const Bond& b : md.families.of(node)) {
    const Vec3 y = x[b.neighbor] - xi0;
    const double r2 = b.length * b.length;
    const double s2 = dot(y, y) / r2;
    if (!(s2 >= kCollapseRatio * kCollapseRatio)) throw CollapsedBond("bond collapsed at node " + std::to_string(node));
    const double g = log_branch ? 0.5 * std::log(s2) : stretch_pow(s2, m);
    const double c = b.weight * b.dv * g / r2;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) += c * b.xi[i] * b.xi[j];
  }
  Tensor2 E = double_contract(B, md.shapes.Linv[node]);
  if (!log_branch) {
    E -= Tensor2::identity(d);
    E *= 1.0 / (2.0 * m);
  }
  return E;
}

Tensor2 silling_defgrad(const Model& md, const std::vector<Vec3>& x, int node) {
  const int d = md.dim();
  Tensor2 A(d);
  for (const Bond& b : md.families.of(node)) {
    const Vec3 y = x[b.neighbor] - x[node];
    const double c = b.weight * b.dv;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) += c * y[i] * b.xi[j];
  }
  return A * md.shapes.Kinv[node];
}

}  // namespace

Tensor2 nodal_tensor(const Model& md, const std::vector<Vec3>& x, int node) {
  if (md.material.family == ModelFamily::Generalized) {
    const Tensor2 S = stress_generalized(generalized_strain(md, x, node), md.material, node);
    return double_contract(md.shapes.Linv[node], S);
  }
  const Tensor2 sigma = stress_silling(silling_defgrad(md, x, node), md.material, node);
  return sigma * md.shapes.Kinv[node];
}

namespace {

// Runs body(i) for every node, rethrowing the first exception after the loop.
template <class Body>
void for_nodes(std::size_t n, Exec exec, Body body) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(static_cast<int>(i));
    return;
  }
  std::exception_ptr err;
  std::mutex mtx;
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < nn; ++i) {
    try {
      body(static_cast<int>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lk(mtx);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

Tensor2 nodal_strain(const Model& md, const std::vector<Vec3>& x, int node) {
  if (md.material.family == ModelFamily::Generalized) return generalized_strain(md, x, node);
  return small_strain(silling_defgrad(md, x, node));
}

void nodal_tensors(const Model& md, const std::vector<Vec3>& x, std::vector<Tensor2>& out, Exec exec) {
  out.assign(md.size(), Tensor2(md.dim()));
  for_nodes(md.size(), exec, [&](int i) { out[i] = nodal_tensor(md, x, i); });
}

Vec3 internal_force_node(const Model& md, const std::vector<Vec3>& x, const std::vector<Tensor2>& nodal, int node) {
  Vec3 f{0.0, 0.0, 0.0};
  const Tensor2& Mi = nodal[node];
  if (md.material.family == ModelFamily::Silling) {
    for (const Bond& b : md.families.of(node)) {
      const Tensor2& Mj = nodal[b.neighbor];
      const Vec3 t = Mi.apply(b.xi) + Mj.apply(b.xi);
      f += (b.weight * b.dv) * t;
    }
    return f;
  }
  const double m = md.material.m;
  for (const Bond& b : md.families.of(node)) {
    const Vec3 y = x[b.neighbor] - x[node];
    const double y2 = dot(y, y);
    const double r2 = b.length * b.length;
    const double s2 = y2 / r2;
    if (!(s2 >= kCollapseRatio * kCollapseRatio)) throw CollapsedBond("bond collapsed at node " + std::to_string(node));
    const double proj = (Mi.quad(b.xi) + nodal[b.neighbor].quad(b.xi)) / r2;
    f += (b.weight * b.dv * proj * stretch_pow(s2, m) / y2) * y;
  }
  return f;
}

void internal_force(const Model& md, const std::vector<Vec3>& x, std::vector<Vec3>& f, Exec exec) {
  if (x.size() != md.size()) throw ContractViolation("position field size does not match node count");
  std::vector<Tensor2> nodal;
  nodal_tensors(md, x, nodal, exec);
  f.assign(md.size(), Vec3{0.0, 0.0, 0.0});
  for_nodes(md.size(), exec, [&](int i) { f[i] = internal_force_node(md, x, nodal, i); });
}

double strain_energy(const Model& md, const std::vector<Vec3>& x) {
  double u = 0.0;
  for (std::size_t i = 0; i < md.size(); ++i) {
    const int n = static_cast<int>(i);
    u += strain_energy_density(nodal_strain(md, x, n), md.material, n) * md.nodes.volume[i];
  }
  return u;
}

}  // namespace peristab
