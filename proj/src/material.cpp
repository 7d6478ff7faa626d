#include "peristab/material.hpp"

#include <algorithm>
#include <cmath>

#include "peristab/errors.hpp"
#include "peristab/kinematics.hpp"

namespace peristab {

void MaterialSpec::validate(int dim, std::size_t n_nodes) const {
  if (!std::isfinite(m)) throw ConfigError("Seth-Hill exponent must be finite");
  if (!(rho0 > 0.0)) throw ConfigError("density must be positive");
  switch (law) {
    case LawKind::HydrostaticLinear:
      if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
      break;
    case LawKind::Hookean1D:
      if (dim != 1) throw ConfigError("hookean-1d law requires a 1D body");
      if (!E_field.empty()) {
        if (E_field.size() != n_nodes) throw ConfigError("modulus field size does not match node count");
        for (double e : E_field)
          if (!(e > 0.0)) throw ConfigError("modulus field must be positive everywhere");
      } else if (!(E0 > 0.0)) {
        throw ConfigError("Young's modulus must be positive");
      }
      break;
    case LawKind::IsotropicLinear:
      if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0)) throw ConfigError("need mu > 0 and lambda + 2 mu > 0");
      break;
  }
}

double MaterialSpec::max_modulus() const {
  switch (law) {
    case LawKind::HydrostaticLinear:
      return kappa;
    case LawKind::Hookean1D:
      return E_field.empty() ? E0 : *std::max_element(E_field.begin(), E_field.end());
    case LawKind::IsotropicLinear:
      return lambda + 2.0 * mu;
  }
  return 0.0;
}

Tensor2 stress_generalized(const Tensor2& E, const MaterialSpec& mat, int node) {
  switch (mat.law) {
    case LawKind::HydrostaticLinear:
      return mat.kappa * E;
    case LawKind::Hookean1D:
      if (E.dim() != 1) throw ContractViolation("hookean-1d law applied to a multi-dimensional strain");
      return mat.young(node) * E;
    case LawKind::IsotropicLinear: {
      Tensor2 S = (2.0 * mat.mu) * E;
      S += (mat.lambda * E.trace()) * Tensor2::identity(E.dim());
      return S;
    }
  }
  return E;
}

Tensor4 stress_moduli(const MaterialSpec& mat, int dim, int node) {
  switch (mat.law) {
    case LawKind::HydrostaticLinear: {
      Tensor4 c = Tensor4::sym_identity(dim);
      c *= mat.kappa;
      return c;
    }
    case LawKind::Hookean1D: {
      if (dim != 1) throw ContractViolation("hookean-1d law in dimension > 1");
      Tensor4 c(1);
      c(0, 0, 0, 0) = mat.young(node);
      return c;
    }
    case LawKind::IsotropicLinear: {
      Tensor4 c = Tensor4::sym_identity(dim);
      c *= 2.0 * mat.mu;
      Tensor4 l = Tensor4::dyad(Tensor2::identity(dim), Tensor2::identity(dim));
      l *= mat.lambda;
      c += l;
      return c;
    }
  }
  return Tensor4(dim);
}

double strain_energy_density(const Tensor2& E, const MaterialSpec& mat, int node) {
  switch (mat.law) {
    case LawKind::HydrostaticLinear:
      return 0.5 * mat.kappa * double_dot(E, E);
    case LawKind::Hookean1D:
      return 0.5 * mat.young(node) * E(0, 0) * E(0, 0);
    case LawKind::IsotropicLinear: {
      const double t = E.trace();
      return 0.5 * mat.lambda * t * t + mat.mu * double_dot(E, E);
    }
  }
  return 0.0;
}

Tensor2 small_strain(const Tensor2& F) {
  Tensor2 e = 0.5 * (F + F.transpose());
  e -= Tensor2::identity(F.dim());
  return e;
}

Tensor2 stress_silling(const Tensor2& F, const MaterialSpec& mat, int node) {
  return stress_generalized(small_strain(F), mat, node);
}

Vec3 force_state_generalized(const Bond& b, const Vec3& Y, const Tensor2& S, const Tensor4& Linv, double m) {
  const double y2 = dot(Y, Y);
  const double s2 = y2 / (b.length * b.length);
  if (!(s2 >= kCollapseRatio * kCollapseRatio)) throw CollapsedBond("bond collapsed in force state");
  const Vec3 n = (1.0 / b.length) * b.xi;
  const double c = b.weight * double_contract(Linv, S).quad(n) * stretch_pow(s2, m) / y2;
  return c * Y;
}

Vec3 force_state_generalized_uniform(const Bond& b, const Tensor2& F, const Tensor2& S, const Tensor4& Linv,
                                     double m) {
  const int d = F.dim();
  const Vec3 Fxi = F.apply(b.xi);
  const double r2 = b.length * b.length;
  const double s2 = dot(Fxi, Fxi) / r2;
  double proj = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) proj += S(i, j) * Linv(p, q, i, j) * b.xi[p] * b.xi[q];
  const double c = b.weight * proj * std::pow(s2, m - 1.0) / (r2 * r2);
  Vec3 T{0.0, 0.0, 0.0};
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) T[k] += c * F(k, l) * b.xi[l];
  return T;
}

Vec3 force_state_silling(const Bond& b, const Tensor2& sigma, const Tensor2& Kinv) {
  return b.weight * (sigma * Kinv).apply(b.xi);
}

}  // namespace peristab
