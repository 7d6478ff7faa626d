#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "peristab/kernels.hpp"

namespace peristab {

// ---------------------------------------------------------------------------
// Finite-difference Jacobian of the assembled force density.

inline constexpr double kDefaultFdStep = 1e-6;  // times dx

/// Dense central-difference matrix d f_k(X_I) / d x_l(X_J), row/column index
/// I*dim + k. Small meshes only.
Eigen::MatrixXd jacobian_fd(const Model& model, const std::vector<Vec3>& x, double eps, Exec exec = Exec::Parallel);

/// dim x dim block d f(X_I) / d x(X_J) by central differences.
Tensor2 jacobian_fd_block(const Model& model, const std::vector<Vec3>& x, int I, int J, double eps);
/// Richardson-extrapolated block, (4 D(eps/2) - D(eps)) / 3.
Tensor2 jacobian_fd_block_richardson(const Model& model, const std::vector<Vec3>& x, int I, int J, double eps);

// ---------------------------------------------------------------------------
// Analytic diagonal blocks on homogeneous states.

/// Diagonal block d f_k(X)/d x_l(X) of the generalized model at `node`. With
/// discrete=false only the term surviving in the continuum is returned.
/// Throws ContractViolation unless the family of `node` is deformed
/// homogeneously (Y = F xi).
Tensor2 diag_block_analytic(const Model& model, const std::vector<Vec3>& x, int node, bool discrete);

/// The 1D interior diagonal entry for x = (1+a)X, S = kappa E.
double df1d_analytic(double m, double a, int N, double kappa, double dx);

// ---------------------------------------------------------------------------
// Continuum indicator and critical exponents.

/// Gamma(m) by quadrature for a spherical influence function. The radial
/// integral starts at `r_cut` in 1D and 2D, where it diverges at the origin
/// for step influence; 3D integrates from 0.
double gamma_m(double m, int dim, const InfluenceSpec& infl, double r_cut);
double m_critical(int dim);

// ---------------------------------------------------------------------------
// Discrete hydrostatic criteria.

bool stable_1d(double m, double a, double N);
/// Boundary of stable_1d located by bisection on [lo, hi]; empty when the
/// endpoints agree.
std::optional<double> critical_strain_1d(double m, double N, double lo, double hi);

struct Eig2D {
  double lambda1 = 0.0, lambda2 = 0.0;
};
Eig2D eig_2d_hydro(double m, double a, double N, double kappa, double dx);
/// Sign-carrying bracket of eig_2d_hydro.
double bracket_2d(double m, double a, double N);
bool stable_2d(double m, double a, double N);
std::optional<double> critical_strain_2d(double m, double N, double lo, double hi);

/// Literal lattice evaluation of the 2D hydrostatic diagonal block before its
/// ln N reduction, with the isotropic continuum Linv and moduli kappa d_ij d_rs.
Tensor2 diag_2d_hydro_lattice(double m, double a, int N, double kappa, double dx);

enum class LatticePattern { InvR2, X1sqR4, X1sqX2sqR6, X1p4R6, X1p6R8, X1p4X2sqR8 };
inline constexpr LatticePattern kAllPatterns[] = {LatticePattern::InvR2,  LatticePattern::X1sqR4,
                                                 LatticePattern::X1sqX2sqR6, LatticePattern::X1p4R6,
                                                 LatticePattern::X1p6R8, LatticePattern::X1p4X2sqR8};
std::string pattern_name(LatticePattern p);

struct LatticeSum {
  double exact = 0.0;
  double closed_form = 0.0;
};
/// 2D sums over p^2+q^2 <= N^2, scaled so that dV/(b dx^2) = 1.
LatticeSum lattice_sum(LatticePattern p, int N);

// ---------------------------------------------------------------------------
// Energy test.

/// dT . dY summed over the family (generalized model).
double silling_test(std::span<const Bond> family, std::span<const Vec3> Y, std::span<const Vec3> dY,
                    const Tensor4& Linv, const Tensor2& S, const Tensor2& dS, double m);

/// Interior lattice family in `dim` dimensions under x = (1+a)X, S = kappa a I,
/// with the point itself displaced by eps along axis 0.
double silling_test_hydrostatic(double m, double a, int dim, int N, double kappa, double eps);

// ---------------------------------------------------------------------------
// Region maps.

struct RegionMap {
  int dim = 1;
  double N = 3;
  std::vector<double> m_samples, a_samples;
  /// grid[i][j] = stable at (m_samples[i], a_samples[j]).
  std::vector<std::vector<bool>> stable;
};

RegionMap region_map(int dim, double N, std::pair<double, double> m_range, std::pair<double, double> a_range,
                     int m_count, int a_count);
void write_region_csv(std::ostream& os, const RegionMap& map);

// ---------------------------------------------------------------------------
// Dispersion.

struct DispersionPoint {
  double omega2 = 0.0;
  /// -Im(RHS)/(rho0 u0)
  double imag = 0.0;
};

DispersionPoint dispersion_omega2(double k, double u0, double m, int N, double dx, double E0, double rho0);
/// Small-amplitude limit E0/(rho0 N^2 dx^2) (sum_p sin(k p dx)/p)^2.
double dispersion_linear(double k, int N, double dx, double E0, double rho0);

/// Interior wavenumbers in (0, k_max) where omega^2 touches or crosses zero.
std::vector<double> dispersion_zeros(const std::vector<double>& k, const std::vector<double>& omega2,
                                     const std::function<double(double)>& f);

/// Marginal band for declaring instability from a diagonal entry.
inline double instability_tol(double modulus, double dx) { return 1e-8 * modulus / (dx * dx); }

}  // namespace peristab
