#include "peristab/mesh.hpp"

#include <cmath>
#include <string>

#include "peristab/errors.hpp"

namespace peristab {

NodeSet build_grid(int dim, const Vec3& extents, double dx, double cross_section) {
  if (dim < 1 || dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (!(dx > 0.0)) throw ConfigError("grid spacing must be positive");
  if (!(cross_section > 0.0)) throw ConfigError("cross section must be positive");
  NodeSet ns;
  ns.dim = dim;
  ns.dx = dx;
  ns.cross_section = cross_section;
  for (int a = 0; a < dim; ++a) {
    const double r = extents[a] / dx;
    const double n = std::round(r);
    if (!(extents[a] > 0.0) || n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, r))
      throw ConfigError("extent along axis " + std::to_string(a) + " is not a positive multiple of dx");
    ns.counts[a] = static_cast<int>(n);
  }
  const double dv = dim == 1 ? cross_section * dx : dim == 2 ? cross_section * dx * dx : dx * dx * dx;
  const std::size_t total = static_cast<std::size_t>(ns.counts[0]) * ns.counts[1] * ns.counts[2];
  ns.X.reserve(total);
  ns.ijk.reserve(total);
  ns.volume.assign(total, dv);
  for (int k = 0; k < ns.counts[2]; ++k)
    for (int j = 0; j < ns.counts[1]; ++j)
      for (int i = 0; i < ns.counts[0]; ++i) {
        ns.ijk.push_back({i, j, k});
        Vec3 x{(i + 0.5) * dx, 0.0, 0.0};
        if (dim > 1) x[1] = (j + 0.5) * dx;
        if (dim > 2) x[2] = (k + 0.5) * dx;
        ns.X.push_back(x);
      }
  return ns;
}

double InfluenceSpec::weight(double r) const {
  if (r > horizon * (1.0 + 1e-12)) return 0.0;
  if (kind == InfluenceKind::Step) return 1.0;
  if (!radial) throw ContractViolation("user-radial influence without a weight function");
  const double w = radial(r);
  if (!(w >= 0.0)) throw ContractViolation("influence weight must be non-negative");
  return w;
}

int lattice_radius_sq(double ratio) { return static_cast<int>(std::floor(ratio * ratio + 1e-9)); }

std::vector<std::array<int, 3>> lattice_offsets(int dim, int radius_sq) {
  const int n = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius_sq)) + 1e-12));
  const int ny = dim > 1 ? n : 0;
  const int nz = dim > 2 ? n : 0;
  std::vector<std::array<int, 3>> out;
  for (int p = -n; p <= n; ++p)
    for (int q = -ny; q <= ny; ++q)
      for (int r = -nz; r <= nz; ++r) {
        const int s = p * p + q * q + r * r;
        if (s > 0 && s <= radius_sq) out.push_back({p, q, r});
      }
  return out;
}

FamilyMap build_families(const NodeSet& nodes, const InfluenceSpec& infl) {
  const double ratio = infl.ratio(nodes.dx);
  if (!(ratio >= 1.0 - 1e-12)) throw ContractViolation("horizon smaller than grid spacing gives empty families");
  const int rsq = lattice_radius_sq(ratio);
  const auto offs = lattice_offsets(nodes.dim, rsq);

  std::vector<std::size_t> starts{0};
  std::vector<Bond> bonds;
  starts.reserve(nodes.size() + 1);
  bonds.reserve(nodes.size() * offs.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& c = nodes.ijk[n];
    for (const auto& o : offs) {
      const int i = c[0] + o[0], j = c[1] + o[1], k = c[2] + o[2];
      if (i < 0 || j < 0 || k < 0 || i >= nodes.counts[0] || j >= nodes.counts[1] || k >= nodes.counts[2]) continue;
      Bond b;
      b.neighbor = nodes.id(i, j, k);
      b.offset = o;
      b.xi = {o[0] * nodes.dx, o[1] * nodes.dx, o[2] * nodes.dx};
      b.length = std::sqrt(static_cast<double>(o[0] * o[0] + o[1] * o[1] + o[2] * o[2])) * nodes.dx;
      b.weight = infl.kind == InfluenceKind::Step ? 1.0 : infl.weight(b.length);
      b.dv = nodes.volume[b.neighbor];
      bonds.push_back(b);
    }
    starts.push_back(bonds.size());
  }
  return FamilyMap(std::move(starts), std::move(bonds), offs.size(), rsq);
}

std::vector<int> boundary_region(const NodeSet& nodes, int axis, Side side, int layers) {
  if (axis < 0 || axis >= nodes.dim) throw ConfigError("boundary axis out of range");
  if (layers < 1) throw ConfigError("boundary region needs at least one layer");
  if (layers > nodes.counts[axis]) throw ConfigError("boundary region exceeds grid size");
  std::vector<int> out;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const int c = nodes.ijk[n][axis];
    const bool in = side == Side::Lower ? c < layers : c >= nodes.counts[axis] - layers;
    if (in) out.push_back(static_cast<int>(n));
  }
  return out;
}

}  // namespace peristab
