#pragma once

#include <vector>

#include "peristab/mesh.hpp"
#include "peristab/tensor.hpp"

namespace peristab {

enum class ModelFamily { Silling, Generalized };
enum class LawKind { HydrostaticLinear, Hookean1D, IsotropicLinear };

struct MaterialSpec {
  ModelFamily family = ModelFamily::Generalized;
  /// Seth-Hill exponent (generalized family only).
  double m = 1.0;
  LawKind law = LawKind::HydrostaticLinear;
  double kappa = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  /// Young's modulus of hookean-1d; overridden per node by E_field when non-empty.
  double E0 = 1.0;
  std::vector<double> E_field;
  double rho0 = 1.0;

  /// Throws ConfigError on invalid constants or law/dimension mismatch.
  void validate(int dim, std::size_t n_nodes) const;
  double young(int node) const { return E_field.empty() || node < 0 ? E0 : E_field[node]; }
  /// Largest wave modulus over the body.
  double max_modulus() const;
};

/// Stress conjugate to the strain E: S = kappa E, E(x) E, or lambda tr(E) I + 2 mu E.
Tensor2 stress_generalized(const Tensor2& E, const MaterialSpec& mat, int node = -1);
/// dS/dE.
Tensor4 stress_moduli(const MaterialSpec& mat, int dim, int node = -1);
double strain_energy_density(const Tensor2& E, const MaterialSpec& mat, int node = -1);

/// Small strain sym(F) - I used by the Silling family.
Tensor2 small_strain(const Tensor2& F);
/// First Piola stress of the Silling family: the law applied to small_strain(F).
Tensor2 stress_silling(const Tensor2& F, const MaterialSpec& mat, int node = -1);

/// T_k = w S_ij (xi_p xi_q/|xi|^2) Linv_pqij (|Y|/|xi|)^(2m) Y_k/|Y|^2.
Vec3 force_state_generalized(const Bond& b, const Vec3& Y, const Tensor2& S, const Tensor4& Linv, double m);
/// Same state written for Y = F xi.
Vec3 force_state_generalized_uniform(const Bond& b, const Tensor2& F, const Tensor2& S, const Tensor4& Linv,
                                     double m);
/// T = w sigma Kinv xi.
Vec3 force_state_silling(const Bond& b, const Tensor2& sigma, const Tensor2& Kinv);

/// s^(2m) from s^2, with exact fast paths for common exponents.
inline double stretch_pow(double s2, double m) {
  if (m == 1.0) return s2;
  if (m == 0.5) return std::sqrt(s2);
  if (m == 2.0) return s2 * s2;
  return std::pow(s2, m);
}

}  // namespace peristab
