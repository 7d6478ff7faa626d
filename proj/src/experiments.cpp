#include "peristab/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>

#include "peristab/errors.hpp"

namespace peristab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec3> displaced(const Model& md, const std::vector<Vec3>& u) {
  std::vector<Vec3> x(md.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = md.nodes.X[i] + u[i];
  return x;
}

}  // namespace

Model bar_model(int nodes, double length, int N, const MaterialSpec& mat) {
  if (nodes < 1) throw ConfigError("node count must be positive");
  const double dx = length / nodes;
  NodeSet ns = build_grid(1, {length, 0.0, 0.0}, dx);
  return make_model(std::move(ns), InfluenceSpec::step(N * dx), mat);
}

std::vector<Vec3> hydrostatic_positions(const Model& model, double a) {
  std::vector<Vec3> x(model.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 + a) * model.nodes.X[i];
  return x;
}

// ---------------------------------------------------------------------------
// Singular bar

double singular_modulus(double x, double L, double alpha, double E0) {
  const double s = x / L - 0.5;
  if (s <= 0.0) return E0;
  return E0 / (1.0 + alpha / (2.0 * std::sqrt(s)));
}

double singular_u_exact(double x, double L, double alpha) {
  const double s = x / L - 0.5;
  return s <= 0.0 ? x / L : x / L + alpha * std::sqrt(s);
}

double singular_strain_exact(double x, double L, double alpha) {
  const double s = x / L - 0.5;
  return s <= 0.0 ? 1.0 : 1.0 + alpha / (2.0 * std::sqrt(s));
}

SingularBarResult run_singular_bar(const SingularBarParams& p) {
  if (p.nodes < 4 * p.N) throw ConfigError("singular bar needs at least 4N nodes");
  const double L = p.length;
  const double dx = L / p.nodes;

  MaterialSpec mat;
  mat.family = ModelFamily::Generalized;
  mat.m = p.m;
  mat.law = LawKind::Hookean1D;
  mat.E0 = p.E0;
  mat.rho0 = p.rho0;
  for (int i = 0; i < p.nodes; ++i) mat.E_field.push_back(singular_modulus((i + 0.5) * dx, L, p.alpha, p.E0));
  const Model md = bar_model(p.nodes, L, p.N, mat);

  const int fixed = p.fixed_layers > 0 ? p.fixed_layers : p.N;
  const int loaded = p.load_layers > 0 ? p.load_layers : p.N;
  const double sigma = p.sigma_over_E0 * p.E0;

  ProblemSpec prob;
  prob.model = &md;
  Prescribed bc;
  bc.nodes = boundary_region(md.nodes, 0, Side::Lower, fixed);
  bc.target.assign(bc.nodes.size(), Vec3{0.0, 0.0, 0.0});
  prob.bcs.push_back(bc);
  prob.body_force.assign(md.size(), Vec3{0.0, 0.0, 0.0});
  for (int id : boundary_region(md.nodes, 0, Side::Upper, loaded))
    prob.body_force[id][0] = sigma / (p.rho0 * loaded * dx);
  prob.settings = p.solver;

  SingularBarResult res;
  res.outcome = solve_static(prob, p.steps);
  const auto& u = res.outcome.u;
  const double uscale = sigma * L / p.E0;
  const double escale = sigma / p.E0;
  const double delta = p.N * dx;
  const auto x = displaced(md, u);

  double umax = 0.0, uerr = 0.0, eerr = 0.0;
  for (int i = 0; i < p.nodes; ++i) {
    const double X = md.nodes.X[i][0];
    res.X.push_back(X);
    res.u_norm.push_back(uscale != 0.0 ? u[i][0] / uscale : 0.0);
    res.u_exact.push_back(uscale != 0.0 ? singular_u_exact(X, L, p.alpha) : 0.0);
    double ebar = 0.0;
    try {
      ebar = nodal_strain(md, x, i)(0, 0);
    } catch (const Error&) {
      ebar = std::nan("");
    }
    res.strain_bar.push_back(escale != 0.0 ? ebar / escale : 0.0);
    if (X >= 2.0 * delta && X <= L - 2.0 * delta) {
      umax = std::max(umax, std::abs(res.u_exact.back()));
      uerr = std::max(uerr, std::abs(res.u_norm.back() - res.u_exact.back()));
    }
  }
  for (int i = 0; i + 1 < p.nodes; ++i) {
    const double Xm = 0.5 * (res.X[i] + res.X[i + 1]);
    res.Xm.push_back(Xm);
    const double e = (u[i + 1][0] - u[i][0]) / dx;
    res.strain_norm.push_back(escale != 0.0 ? e / escale : 0.0);
    res.strain_exact.push_back(escale != 0.0 ? singular_strain_exact(Xm, L, p.alpha) : 0.0);
    if (Xm >= 2.0 * delta && Xm <= L - 2.0 * delta && std::abs(Xm - 0.5 * L) > 2.0 * delta) {
      const double d = std::abs(res.strain_norm.back() - res.strain_exact.back());
      eerr = std::isfinite(d) ? std::max(eerr, d) : INFINITY;
    }
  }
  res.disp_error = umax > 0.0 ? uerr / umax : uerr;
  res.strain_error = eerr;
  return res;
}

// ---------------------------------------------------------------------------
// Load-step size

StepRun run_step_case(const StepSizeParams& p, double strain, int steps) {
  MaterialSpec mat;
  mat.family = ModelFamily::Generalized;
  mat.m = p.m;
  mat.law = LawKind::Hookean1D;
  mat.E0 = p.E0;
  const Model md = bar_model(p.nodes, p.length, p.N, mat);

  ProblemSpec prob;
  prob.model = &md;
  for (Side side : {Side::Lower, Side::Upper}) {
    Prescribed bc;
    bc.nodes = boundary_region(md.nodes, 0, side, p.layers);
    for (int id : bc.nodes) bc.target.push_back({strain * (md.nodes.X[id][0] - 0.5 * p.length), 0.0, 0.0});
    prob.bcs.push_back(bc);
  }
  prob.settings = p.solver;

  StepRun run;
  run.strain = strain;
  run.steps = steps;
  const SolveOutcome out = solve_static(prob, steps);
  run.converged = out.converged;
  run.iterations = out.total_iterations;
  run.growth = out.growth;
  run.diagnostic = out.diagnostic;

  const double dx = md.nodes.dx;
  double dev = 0.0;
  for (std::size_t i = 0; i + 1 < md.size(); ++i) {
    const double e = (out.u[i + 1][0] - out.u[i][0]) / dx;
    const double d = std::abs(e - strain);
    dev = std::isfinite(d) ? std::max(dev, d) : INFINITY;
  }
  run.max_strain_dev = dev;
  run.homogeneous = dev <= p.uniformity_tol * std::max(std::abs(strain), 1e-300);
  if (strain == 0.0) run.homogeneous = dev == 0.0;
  return run;
}

StepSizeResult run_step_size(const StepSizeParams& p) {
  StepSizeResult res;
  for (double strain : p.strains) {
    StepRun first = run_step_case(p, strain, 1);
    res.runs.push_back(first);
    if (first.success()) {
      res.minimal_steps.push_back({strain, 1});
      continue;
    }
    int lo = 1, hi = -1;
    for (int k = 2; k <= p.max_steps; k *= 2) {
      StepRun r = run_step_case(p, strain, k);
      res.runs.push_back(r);
      if (r.success()) {
        hi = k;
        break;
      }
      lo = k;
    }
    if (hi > 0) {
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        StepRun r = run_step_case(p, strain, mid);
        res.runs.push_back(r);
        if (r.success())
          hi = mid;
        else
          lo = mid;
      }
    }
    res.minimal_steps.push_back({strain, hi});
  }
  return res;
}

// ---------------------------------------------------------------------------
// 3D cuboid

Vec3 roughness(const NodeSet& nodes, const std::vector<Vec3>& u) {
  Vec3 out{0.0, 0.0, 0.0};
  const auto& c = nodes.counts;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& q = nodes.ijk[n];
    bool inside = true;
    for (int ax = 0; ax < nodes.dim; ++ax) inside = inside && q[ax] > 0 && q[ax] < c[ax] - 1;
    if (!inside) continue;
    Vec3 mean{0.0, 0.0, 0.0};
    int cnt = 0;
    const int rz = nodes.dim > 2 ? 1 : 0, ry = nodes.dim > 1 ? 1 : 0;
    for (int dk = -rz; dk <= rz; ++dk)
      for (int dj = -ry; dj <= ry; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          mean += u[nodes.id(q[0] + di, q[1] + dj, q[2] + dk)];
          ++cnt;
        }
    for (int a = 0; a < 3; ++a) out[a] = std::max(out[a], std::abs(u[n][a] - mean[a] / cnt));
  }
  return out;
}

Model cuboid_model(const CuboidParams& p) {
  MaterialSpec mat;
  mat.family = ModelFamily::Generalized;
  mat.m = p.m;
  mat.law = LawKind::IsotropicLinear;
  mat.lambda = p.lambda;
  mat.mu = p.mu;
  mat.rho0 = p.rho0;
  NodeSet ns = build_grid(3, p.extents, p.dx);
  return make_model(std::move(ns), InfluenceSpec::step(p.N * p.dx), mat);
}

CuboidRun run_cuboid_once(const Model& md, const CuboidParams& p, double dt) {
  ProblemSpec prob;
  prob.model = &md;
  const double Lx = p.extents[0];
  for (Side side : {Side::Lower, Side::Upper}) {
    Prescribed bc;
    bc.nodes = boundary_region(md.nodes, 0, side, p.layers);
    for (int id : bc.nodes) bc.target.push_back({p.strain * (md.nodes.X[id][0] - 0.5 * Lx), 0.0, 0.0});
    bc.mask = {true, false, false};
    prob.bcs.push_back(bc);
  }

  const int n_steps = static_cast<int>(std::ceil(p.total_time / dt - 1e-9));
  DynamicOptions opt;
  opt.ramp_time = p.ramp_time;
  opt.ramp_shape = p.ramp_shape;
  opt.energy_every = 0;
  opt.snapshot_every = p.snapshots > 0 ? std::max(1, n_steps / p.snapshots) : 0;

  CuboidRun run;
  run.dt = dt;
  run.traj = solve_dynamic(prob, dt, n_steps, opt);
  run.time = run.traj.time;
  for (const auto& r : run.traj.reactions) run.end_force.push_back(r[1][0]);
  run.roughness = roughness(md.nodes, run.traj.u);
  return run;
}

CuboidResult run_cuboid(const CuboidParams& p) {
  if (!(p.total_time > 0.0)) throw ConfigError("cuboid total_time must be positive");
  const Model md = cuboid_model(p);
  const double dt = p.dt_factor * dt_cap(md, 1.0);
  CuboidResult res;
  res.base = run_cuboid_once(md, p, dt);
  res.half = run_cuboid_once(md, p, 0.5 * dt);
  const auto& r = res.base.roughness;
  res.roughness_ratio = std::min(r[1], r[2]) / r[0];

  double fmax = 0.0, dmax = 0.0;
  const std::size_t n = std::min(res.base.end_force.size(), (res.half.end_force.size() + 1) / 2);
  for (std::size_t s = 0; s < n; ++s) {
    fmax = std::max(fmax, std::abs(res.base.end_force[s]));
    dmax = std::max(dmax, std::abs(res.half.end_force[2 * s] - res.base.end_force[s]));
  }
  res.force_history_diff = fmax > 0.0 ? dmax / fmax : dmax;
  if (!res.base.traj.ok || !res.half.traj.ok) res.force_history_diff = INFINITY;
  return res;
}

// ---------------------------------------------------------------------------
// Dispersion

DispersionResult run_dispersion(const DispersionParams& p) {
  if (p.samples < 3) throw ConfigError("dispersion needs at least 3 samples");
  DispersionResult res;
  const double kmax = 2.0 * kPi / p.dx;
  for (int i = 0; i < p.samples; ++i) res.k.push_back(kmax * i / (p.samples - 1));
  for (double u0r : p.u0_values)
    for (double m : p.m_values) {
      DispersionCurve c;
      c.m = m;
      c.u0 = u0r * p.dx;
      for (double k : res.k) {
        const auto pt = dispersion_omega2(k, c.u0, m, p.N, p.dx, p.E0, p.rho0);
        c.omega2.push_back(pt.omega2);
        c.imag.push_back(pt.imag);
      }
      c.zeros = dispersion_zeros(res.k, c.omega2, [&](double k) {
        return dispersion_omega2(k, c.u0, m, p.N, p.dx, p.E0, p.rho0).omega2;
      });
      res.curves.push_back(std::move(c));
    }
  return res;
}

// ---------------------------------------------------------------------------
// Verification table

namespace {

Tensor4 iso_L2(double V) {
  Tensor4 L(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          L(i, j, k, l) = V / 8.0 * ((i == j) * (k == l) + (i == k) * (j == l) + (i == l) * (j == k));
  return L;
}

Tensor4 iso_Linv2(double V) {
  Tensor4 L(2);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
          L(k, l, m, n) = (2.0 * (k == m) * (l == n) + 2.0 * (k == n) * (l == m) - (k == l) * (m == n)) / V;
  return L;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string pass(bool ok) { return ok ? "pass" : "fail"; }

Model plate_model(int N, double m, int span) {
  MaterialSpec mat;
  mat.family = ModelFamily::Generalized;
  mat.m = m;
  mat.law = LawKind::HydrostaticLinear;
  mat.kappa = 1.0;
  NodeSet ns = build_grid(2, {double(span), double(span), 0.0}, 1.0);
  return make_model(std::move(ns), InfluenceSpec::step(N), mat);
}

}  // namespace

std::vector<VerifyRow> run_verify(int N_min, int N_max) {
  if (N_min < 1 || N_max < N_min) throw ConfigError("invalid N range for verify");
  std::vector<VerifyRow> rows;

  for (LatticePattern pat : kAllPatterns) {
    double prev = INFINITY;
    bool monotone = true;
    for (int N = N_min; N <= N_max; ++N) {
      const auto s = lattice_sum(pat, N);
      const double rel = std::abs(s.exact - s.closed_form) / std::abs(s.exact);
      rows.push_back({"lattice " + pattern_name(pat) + " N=" + std::to_string(N), s.exact, s.closed_form, rel, ""});
      monotone = monotone && rel < prev;
      prev = rel;
    }
    rows.push_back({"lattice " + pattern_name(pat) + " monotone", prev, 0.0, prev, pass(monotone)});
  }

  for (double V : {1.0, kPi * 9.0, 0.37}) {
    const double d = max_abs_diff(invert_sym4(iso_L2(V)), iso_Linv2(V)) * V;
    rows.push_back({"shape inverse 2D V=" + g(V), d, 0.0, d, pass(d <= 1e-12)});
  }

  double gdev = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      int s = 0;
      for (int i = 0; i < 2; ++i)
        for (int r = 0; r < 2; ++r) s += gamma6(i, i, k, l, r, r);
      gdev = std::max(gdev, std::abs(double(s) - 3.0 * (k == l)));
    }
  rows.push_back({"gamma contraction", gdev, 0.0, gdev, pass(gdev == 0.0)});

  for (double m : {1.0, 0.5}) {
    for (double a : {-0.01, 0.05}) {
      double prev = INFINITY;
      bool improves = true;
      for (int N = N_min; N <= N_max; ++N) {
        const Tensor2 D = diag_2d_hydro_lattice(m, a, N, 1.0, 1.0);
        const double lam = eig_2d_hydro(m, a, N, 1.0, 1.0).lambda1;
        const double rel = std::abs(D(0, 0) - lam) / std::abs(lam);
        rows.push_back({"2D block direct vs eigenvalue m=" + g(m) + " a=" + g(a) +
                            " N=" + std::to_string(N),
                        D(0, 0), lam, rel, ""});
        improves = improves && rel < prev;
        prev = rel;
      }
      rows.push_back({"2D block direct vs eigenvalue m=" + g(m) + " a=" + g(a) + " improves",
                      prev, 0.0, prev, improves ? "pass" : "recorded"});
    }
  }

  for (int N : {2, 3, 4}) {
    const int span = 4 * N + 3;
    const Model md = plate_model(N, 1.0, span);
    const double a = -0.02;
    const auto x = hydrostatic_positions(md, a);
    const int c = md.nodes.id(span / 2, span / 2);
    const Tensor2 fd = jacobian_fd_block_richardson(md, x, c, c, 1e-4);
    const Tensor2 an = diag_block_analytic(md, x, c, true);
    const double rel = max_abs_diff(fd, an) / an.norm();
    rows.push_back({"2D model block fd vs analytic N=" + std::to_string(N), fd(0, 0), an(0, 0), rel,
                    pass(rel <= 1e-6)});
    const double lat = diag_2d_hydro_lattice(1.0, a, N, 1.0, 1.0)(0, 0);
    rows.push_back({"2D model block vs lattice form N=" + std::to_string(N), an(0, 0), lat, an(0, 0) / lat, ""});
  }

  for (int N : {2, 3, 4}) {
    const int span = 4 * N + 3;
    const Model md = plate_model(N, 1.0, span);
    const int c = md.nodes.id(span / 2, span / 2);
    auto top = [&](double a) {
      const Tensor2 d = diag_block_analytic(md, hydrostatic_positions(md, a), c, true);
      return std::max(d(0, 0), d(1, 1));
    };
    double lo = -0.5, hi = 0.0;
    if (top(lo) > 0.0) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (top(mid) > 0.0 ? lo : hi) = mid;
      }
      const auto root = critical_strain_2d(1.0, N, -0.5, 0.0);
      const double ref = root ? *root : std::nan("");
      rows.push_back({"2D model critical strain m=1 N=" + std::to_string(N), hi, ref, std::abs(hi - ref), ""});
    }
  }
  return rows;
}

}  // namespace peristab
