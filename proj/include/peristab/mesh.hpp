#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "peristab/tensor.hpp"

namespace peristab {

/// Uniform cell-centred grid in 1, 2 or 3 dimensions. Node ids run with the
/// x index fastest.
struct NodeSet {
  int dim = 1;
  double dx = 1.0;
  /// A (1D), thickness b (2D) or 1 (3D).
  double cross_section = 1.0;
  std::array<int, 3> counts{1, 1, 1};
  std::vector<Vec3> X;
  std::vector<std::array<int, 3>> ijk;
  std::vector<double> volume;

  std::size_t size() const { return X.size(); }
  int id(int i, int j = 0, int k = 0) const { return i + counts[0] * (j + counts[1] * k); }
  double extent(int axis) const { return counts[axis] * dx; }
};

/// Throws ConfigError unless every extent is a positive integer multiple of dx.
NodeSet build_grid(int dim, const Vec3& extents, double dx, double cross_section = 1.0);

enum class InfluenceKind { Step, UserRadial };

struct InfluenceSpec {
  InfluenceKind kind = InfluenceKind::Step;
  double horizon = 0.0;
  /// Weight as a function of |xi| (UserRadial only).
  std::function<double(double)> radial;

  static InfluenceSpec step(double horizon) { return {InfluenceKind::Step, horizon, {}}; }
  static InfluenceSpec user(double horizon, std::function<double(double)> w) {
    return {InfluenceKind::UserRadial, horizon, std::move(w)};
  }
  double weight(double r) const;
  /// delta / dx
  double ratio(double dx) const { return horizon / dx; }
};

struct Bond {
  int neighbor = -1;
  std::array<int, 3> offset{0, 0, 0};
  Vec3 xi{0.0, 0.0, 0.0};
  double length = 0.0;
  double weight = 0.0;
  /// Volume of the neighbor node.
  double dv = 0.0;
};

/// Compressed per-node bond lists.
class FamilyMap {
 public:
  FamilyMap() = default;
  FamilyMap(std::vector<std::size_t> offsets, std::vector<Bond> bonds, std::size_t full_size, int n_ratio_sq)
      : offsets_(std::move(offsets)), bonds_(std::move(bonds)), full_size_(full_size), n_sq_(n_ratio_sq) {}

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const Bond> of(std::size_t node) const {
    return {bonds_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }
  const std::vector<Bond>& bonds() const { return bonds_; }
  /// Family size of a node far from every boundary.
  std::size_t full_size() const { return full_size_; }
  bool interior(std::size_t node) const { return of(node).size() == full_size_; }
  /// Largest integer p^2+q^2+r^2 admitted into a family.
  int radius_sq() const { return n_sq_; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Bond> bonds_;
  std::size_t full_size_ = 0;
  int n_sq_ = 0;
};

/// Integer lattice offsets (p,q,r) != 0 with p^2+q^2+r^2 <= radius_sq, in
/// lexicographic order, restricted to the first `dim` axes.
std::vector<std::array<int, 3>> lattice_offsets(int dim, int radius_sq);

/// Largest admissible p^2+q^2+r^2 for a horizon of `ratio` grid spacings.
int lattice_radius_sq(double ratio);

FamilyMap build_families(const NodeSet& nodes, const InfluenceSpec& infl);

enum class Side { Lower, Upper };

/// Ids of the `layers` grid planes nearest the chosen face, in ascending order.
std::vector<int> boundary_region(const NodeSet& nodes, int axis, Side side, int layers);

}  // namespace peristab
