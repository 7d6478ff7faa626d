#pragma once

#include <string>
#include <vector>

#include "peristab/solver.hpp"
#include "peristab/stability.hpp"

namespace peristab {

/// Uniform 1D bar of `nodes` nodes on [0, length] with horizon N dx.
Model bar_model(int nodes, double length, int N, const MaterialSpec& mat);
/// x = (1 + a) X on every node.
std::vector<Vec3> hydrostatic_positions(const Model& model, double a);

// ---------------------------------------------------------------------------

struct SingularBarParams {
  double alpha = 10.0;
  double sigma_over_E0 = 1e-3;
  double m = 1.0;
  int N = 3;
  int nodes = 500;
  double length = 1.0;
  double E0 = 1.0;
  double rho0 = 1.0;
  /// Fixed layers at x = 0 and loaded layers at x = L; <= 0 means N.
  int fixed_layers = 0;
  int load_layers = 0;
  int steps = 1;
  SolverSettings solver;
};

struct SingularBarResult {
  SolveOutcome outcome;
  std::vector<double> X, u_norm, u_exact;
  /// Nearest-neighbour strain at bond midpoints Xm.
  std::vector<double> Xm, strain_norm, strain_exact;
  /// Nonlocal strain per node, normalized.
  std::vector<double> strain_bar;
  /// max |u - u_exact| / max |u_exact| over nodes at least 2 delta from both ends.
  double disp_error = 0.0;
  /// max |eps - eps_exact| over the same window less 2 delta either side of
  /// the singular point x = L/2, normalized units.
  double strain_error = 0.0;
};

double singular_modulus(double x, double L, double alpha, double E0);
double singular_u_exact(double x, double L, double alpha);
double singular_strain_exact(double x, double L, double alpha);
SingularBarResult run_singular_bar(const SingularBarParams& p);

// ---------------------------------------------------------------------------

struct StepSizeParams {
  double m = 1.0;
  int N = 3;
  int nodes = 200;
  double length = 1.0;
  int layers = 6;
  double E0 = 1.0;
  std::vector<double> strains{1.0, -0.001, -0.0001};
  int max_steps = 4096;
  /// Interior nearest-neighbour strain must match the applied strain to this
  /// relative tolerance for a run to count as reaching the target state.
  double uniformity_tol = 1e-6;
  SolverSettings solver;
};

struct StepRun {
  double strain = 0.0;
  int steps = 0;
  bool converged = false;
  bool homogeneous = false;
  int iterations = 0;
  double growth = 1.0;
  double max_strain_dev = 0.0;
  std::string diagnostic;
  bool success() const { return converged && homogeneous; }
};

struct StepSizeResult {
  std::vector<StepRun> runs;
  /// Smallest step count found to succeed per applied strain (-1: none up to max_steps).
  std::vector<std::pair<double, int>> minimal_steps;
};

StepRun run_step_case(const StepSizeParams& p, double strain, int steps);
StepSizeResult run_step_size(const StepSizeParams& p);

// ---------------------------------------------------------------------------

struct CuboidParams {
  Vec3 extents{4.0, 1.0, 1.0};
  double dx = 1.0 / 6.0;
  int N = 3;
  double m = 0.0;
  double lambda = 0.4;
  double mu = 0.4;
  double rho0 = 1.0;
  /// Applied engineering strain along x.
  double strain = -0.01;
  int layers = 3;
  /// dt as a fraction of dt_cap(model, 1).
  double dt_factor = 0.2;
  double ramp_time = 10.0;
  RampShape ramp_shape = RampShape::Smooth;
  double total_time = 20.0;
  int snapshots = 4;
};

struct CuboidRun {
  Trajectory traj;
  double dt = 0.0;
  std::vector<double> time;
  /// x component of the internal force resultant on the +x end set.
  std::vector<double> end_force;
  Vec3 roughness{0.0, 0.0, 0.0};
};

struct CuboidResult {
  CuboidRun base, half;
  double roughness_ratio = 0.0;
  /// max |F_half - F_base| / max |F_base| at common sample times.
  double force_history_diff = 0.0;
};

/// max over nodes with a complete 26-neighbourhood of |u_c - mean of neighbours|.
Vec3 roughness(const NodeSet& nodes, const std::vector<Vec3>& u);
Model cuboid_model(const CuboidParams& p);
CuboidRun run_cuboid_once(const Model& model, const CuboidParams& p, double dt);
CuboidResult run_cuboid(const CuboidParams& p);

// ---------------------------------------------------------------------------

struct DispersionParams {
  int N = 3;
  double dx = 1.0;
  double E0 = 1.0;
  double rho0 = 1.0;
  std::vector<double> m_values{0.0, 0.5, 1.0};
  /// Amplitudes in units of dx.
  std::vector<double> u0_values{1e-8, 0.1};
  int samples = 401;
};

struct DispersionCurve {
  double m = 0.0, u0 = 0.0;
  std::vector<double> omega2, imag;
  std::vector<double> zeros;
};

struct DispersionResult {
  std::vector<double> k;
  std::vector<DispersionCurve> curves;
};

DispersionResult run_dispersion(const DispersionParams& p);

// ---------------------------------------------------------------------------

struct VerifyRow {
  std::string check;
  double value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  /// Empty when the row is recorded without a pass/fail threshold.
  std::string status;
};

std::vector<VerifyRow> run_verify(int N_min, int N_max);

}  // namespace peristab
