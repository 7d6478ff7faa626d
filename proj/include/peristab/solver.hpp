#pragma once

#include <array>
#include <string>
#include <vector>

#include "peristab/kernels.hpp"

namespace peristab {

/// Displacement constraint on a node set. Components with mask == false are free.
struct Prescribed {
  std::vector<int> nodes;
  /// Displacement of each node at full load.
  std::vector<Vec3> target;
  std::array<bool, 3> mask{true, true, true};
};

struct SolverSettings {
  /// Converged when ||residual||_inf <= tol * force scale.
  double tol = 1e-10;
  int max_iter = 200;
  double growth_limit = 1e3;
  /// "auto", "newton" or "adr".
  std::string scheme = "auto";
  int newton_dof_limit = 2000;
  /// Finite-difference step, in units of dx.
  double fd_step = 1e-6;
  int adr_max_iter = 200000;
  /// Reference force density; <= 0 derives it from the full-load trial state.
  double force_scale = 0.0;
  /// Lower bound of the derived force scale, in units of C / dx^2.
  double scale_floor = 1e-6;
};

struct ProblemSpec {
  const Model* model = nullptr;
  std::vector<Prescribed> bcs;
  /// Body force per unit mass at each node (may be empty).
  std::vector<Vec3> body_force;
  SolverSettings settings;

  /// Throws ConfigError for overlapping sets and ContractViolation for bad ids.
  void validate() const;
};

struct StepRecord {
  int step = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct SolveOutcome {
  bool converged = false;
  std::vector<Vec3> u;
  /// ||residual||_inf after every iteration, all steps concatenated.
  std::vector<double> residuals;
  std::vector<StepRecord> steps;
  int failed_step = -1;
  /// Largest residual growth over a step's initial residual.
  double growth = 1.0;
  double force_scale = 0.0;
  std::string scheme;
  std::string diagnostic;
  int total_iterations = 0;
};

/// Sets prescribed components to ramp * target; other entries are untouched.
void apply_bc(std::vector<Vec3>& u, const std::vector<Prescribed>& bcs, double ramp);

/// Residual force density f_int + rho0 b at displacement u.
void residual(const ProblemSpec& prob, const std::vector<Vec3>& u, std::vector<Vec3>& r);

/// Ramps the boundary targets linearly over `steps` load steps.
SolveOutcome solve_static(const ProblemSpec& prob, int steps);
/// Same, starting from the displacement field `u0` instead of zero.
SolveOutcome solve_static(const ProblemSpec& prob, int steps, std::vector<Vec3> u0);

// ---------------------------------------------------------------------------

enum class RampShape { Linear, Smooth };

struct DynamicOptions {
  /// Prescribed displacements grow to their targets over this time.
  double ramp_time = 0.0;
  /// Smooth: (1 - cos(pi t / ramp_time)) / 2, with zero end velocities.
  RampShape ramp_shape = RampShape::Linear;
  /// Record kinetic and strain energy every this many steps (0: never).
  int energy_every = 1;
  /// Store the displacement field every this many steps (0: never).
  int snapshot_every = 0;
  std::vector<Vec3> u0, v0;
};

struct Snapshot {
  int step = 0;
  double time = 0.0;
  std::vector<Vec3> u, v;
};

struct Trajectory {
  bool ok = true;
  int failed_step = -1;
  std::string diagnostic;
  std::vector<double> time;
  std::vector<double> kinetic, strain;
  /// Per step, the internal force resultant sum f dV over each prescribed set.
  std::vector<std::vector<Vec3>> reactions;
  std::vector<Snapshot> snapshots;
  std::vector<Vec3> u, v;
};

/// 0.5 * dx * sqrt(rho0 / C) by default.
double dt_cap(const Model& model, double safety = 0.5);

/// Velocity Verlet on rho0 u'' = f + rho0 b.
Trajectory solve_dynamic(const ProblemSpec& prob, double dt, int n_steps, const DynamicOptions& opt = {});

}  // namespace peristab
