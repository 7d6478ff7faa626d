#include "peristab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <map>
#include <memory>
#include <set>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "peristab/errors.hpp"

namespace peristab {

void ProblemSpec::validate() const {
  if (model == nullptr) throw ContractViolation("problem has no model");
  const std::size_t n = model->size();
  if (!body_force.empty() && body_force.size() != n) throw ContractViolation("body force size does not match node count");
  std::vector<char> used(n, 0);
  for (const auto& bc : bcs) {
    if (bc.target.size() != bc.nodes.size()) throw ContractViolation("prescribed set: one target per node required");
    for (int id : bc.nodes) {
      if (id < 0 || static_cast<std::size_t>(id) >= n) throw ContractViolation("unknown node id " + std::to_string(id));
      if (used[id]) throw ConfigError("prescribed node sets overlap at node " + std::to_string(id));
      used[id] = 1;
    }
  }
}

void apply_bc(std::vector<Vec3>& u, const std::vector<Prescribed>& bcs, double ramp) {
  if (!(ramp >= 0.0 && ramp <= 1.0)) throw ContractViolation("ramp fraction must lie in [0, 1]");
  for (const auto& bc : bcs)
    for (std::size_t q = 0; q < bc.nodes.size(); ++q) {
      const int id = bc.nodes[q];
      if (id < 0 || static_cast<std::size_t>(id) >= u.size()) throw ContractViolation("unknown node id " + std::to_string(id));
      for (int c = 0; c < 3; ++c)
        if (bc.mask[c]) u[id][c] = ramp * bc.target[q][c];
    }
}

namespace {

std::vector<Vec3> positions(const Model& md, const std::vector<Vec3>& u) {
  std::vector<Vec3> x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = md.nodes.X[i] + u[i];
  return x;
}

struct DofMap {
  std::vector<int> index;  // node * 3 + comp -> free dof or -1
  std::vector<std::pair<int, int>> dofs;

  DofMap(const Model& md, const std::vector<Prescribed>& bcs) : index(md.size() * 3, -1) {
    std::vector<char> fixed(md.size() * 3, 0);
    for (const auto& bc : bcs)
      for (int id : bc.nodes)
        for (int c = 0; c < 3; ++c)
          if (bc.mask[c]) fixed[id * 3 + c] = 1;
    for (std::size_t i = 0; i < md.size(); ++i)
      for (int c = 0; c < md.dim(); ++c)
        if (!fixed[i * 3 + c]) {
          index[i * 3 + c] = static_cast<int>(dofs.size());
          dofs.push_back({static_cast<int>(i), c});
        }
  }
  int operator()(int node, int c) const { return index[node * 3 + c]; }
  std::size_t size() const { return dofs.size(); }
};

double free_norm(const DofMap& dm, const std::vector<Vec3>& r) {
  double m = 0.0;
  for (const auto& [i, c] : dm.dofs) {
    const double v = std::abs(r[i][c]);
    if (!(v == v)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, v);
  }
  return m;
}

// Nodes whose force depends on the position of each node: the family of the
// family, plus the node itself.
std::vector<std::vector<int>> influence_rings(const Model& md) {
  std::vector<std::vector<int>> ring(md.size());
  for (std::size_t j = 0; j < md.size(); ++j) {
    std::set<int> s{static_cast<int>(j)};
    for (const Bond& b : md.families.of(j)) {
      s.insert(b.neighbor);
      for (const Bond& b2 : md.families.of(b.neighbor)) s.insert(b2.neighbor);
    }
    ring[j].assign(s.begin(), s.end());
  }
  return ring;
}

class NewtonSolver {
 public:
  NewtonSolver(const ProblemSpec& p, const DofMap& dm) : prob_(p), md_(*p.model), dm_(dm), ring_(influence_rings(md_)) {
    const int R = static_cast<int>(std::floor(std::sqrt(static_cast<double>(md_.families.radius_sq())) + 1e-9));
    stride_ = 4 * R + 1;
    for (std::size_t i = 0; i < md_.size(); ++i) {
      const auto& c = md_.nodes.ijk[i];
      int col = 0, mul = 1;
      for (int a = 0; a < md_.dim(); ++a) {
        col += (c[a] % stride_) * mul;
        mul *= stride_;
      }
      colors_[col].push_back(static_cast<int>(i));
    }
  }

  Eigen::SparseMatrix<double> jacobian(const std::vector<Vec3>& u) const {
    const double h = prob_.settings.fd_step * md_.nodes.dx;
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<Vec3> x = positions(md_, u), fp, fm;
    const std::vector<Vec3> x0 = x;
    for (const auto& [color, nodes] : colors_) {
      (void)color;
      for (int l = 0; l < md_.dim(); ++l) {
        bool any = false;
        for (int j : nodes)
          if (dm_(j, l) >= 0) {
            x[j][l] = x0[j][l] + h;
            any = true;
          }
        if (!any) continue;
        internal_force(md_, x, fp);
        for (int j : nodes)
          if (dm_(j, l) >= 0) x[j][l] = x0[j][l] - h;
        internal_force(md_, x, fm);
        for (int j : nodes) {
          const int col = dm_(j, l);
          if (col < 0) continue;
          x[j][l] = x0[j][l];
          for (int i : ring_[j])
            for (int k = 0; k < md_.dim(); ++k) {
              const int row = dm_(i, k);
              if (row < 0) continue;
              const double v = (fp[i][k] - fm[i][k]) / (2.0 * h);
              if (v != 0.0) trip.emplace_back(row, col, v);
            }
        }
      }
    }
    Eigen::SparseMatrix<double> J(dm_.size(), dm_.size());
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    return J;
  }

 private:
  const ProblemSpec& prob_;
  const Model& md_;
  const DofMap& dm_;
  std::vector<std::vector<int>> ring_;
  int stride_ = 1;
  std::map<int, std::vector<int>> colors_;
};

}  // namespace

void residual(const ProblemSpec& prob, const std::vector<Vec3>& u, std::vector<Vec3>& r) {
  const Model& md = *prob.model;
  internal_force(md, positions(md, u), r);
  if (!prob.body_force.empty())
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += md.material.rho0 * prob.body_force[i];
}

namespace {

struct StepResult {
  bool ok = true;
  int iterations = 0;
  double residual = 0.0;
  double growth = 1.0;
  std::string diagnostic;
};

StepResult newton_step(const ProblemSpec& prob, const DofMap& dm, const NewtonSolver& ns, std::vector<Vec3>& u,
                       double fscale, std::vector<double>& history) {
  const auto& st = prob.settings;
  StepResult res;
  std::vector<Vec3> r;
  try {
    residual(prob, u, r);
  } catch (const CollapsedBond& e) {
    return {false, 0, std::numeric_limits<double>::infinity(), 1.0, e.what()};
  }
  double rn = free_norm(dm, r);
  const double r0 = rn;
  res.residual = rn;
  while (!(rn <= st.tol * fscale)) {
    if (!std::isfinite(rn)) {
      res.ok = false;
      res.diagnostic = "non-finite residual";
      break;
    }
    if (res.iterations >= st.max_iter) {
      res.ok = false;
      res.diagnostic = "iteration cap reached";
      break;
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    try {
      lu.compute(ns.jacobian(u));
    } catch (const CollapsedBond& e) {
      res.ok = false;
      res.diagnostic = e.what();
      break;
    }
    if (lu.info() != Eigen::Success) {
      res.ok = false;
      res.diagnostic = "singular Jacobian";
      break;
    }
    Eigen::VectorXd rhs(dm.size());
    for (std::size_t q = 0; q < dm.size(); ++q) rhs[q] = -r[dm.dofs[q].first][dm.dofs[q].second];
    const Eigen::VectorXd du = lu.solve(rhs);
    for (std::size_t q = 0; q < dm.size(); ++q) u[dm.dofs[q].first][dm.dofs[q].second] += du[q];
    ++res.iterations;
    try {
      residual(prob, u, r);
      rn = free_norm(dm, r);
    } catch (const CollapsedBond& e) {
      res.ok = false;
      res.diagnostic = e.what();
      rn = std::numeric_limits<double>::infinity();
      history.push_back(rn);
      break;
    }
    history.push_back(rn);
    if (r0 > 0.0) res.growth = std::max(res.growth, rn / r0);
    if (r0 > 0.0 && rn >= st.growth_limit * r0) {
      res.ok = false;
      res.diagnostic = "residual grew by factor " + std::to_string(rn / r0);
      break;
    }
  }
  res.residual = rn;
  return res;
}

double lambda_max_estimate(const ProblemSpec& prob, const DofMap& dm, const std::vector<Vec3>& u) {
  const double h = prob.settings.fd_step * prob.model->nodes.dx;
  std::vector<double> v(dm.size());
  for (std::size_t q = 0; q < v.size(); ++q) v[q] = (q % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * ((q * 7) % 5));
  double lam = 0.0;
  std::vector<Vec3> up = u, rp, rm;
  for (int it = 0; it < 40; ++it) {
    double nv = 0.0;
    for (double e : v) nv = std::max(nv, std::abs(e));
    for (double& e : v) e /= nv;
    for (std::size_t q = 0; q < v.size(); ++q) up[dm.dofs[q].first][dm.dofs[q].second] = u[dm.dofs[q].first][dm.dofs[q].second] + h * v[q];
    residual(prob, up, rp);
    for (std::size_t q = 0; q < v.size(); ++q) up[dm.dofs[q].first][dm.dofs[q].second] = u[dm.dofs[q].first][dm.dofs[q].second] - h * v[q];
    residual(prob, up, rm);
    double num = 0.0, den = 0.0;
    std::vector<double> w(v.size());
    for (std::size_t q = 0; q < v.size(); ++q) {
      const auto [i, c] = dm.dofs[q];
      w[q] = -(rp[i][c] - rm[i][c]) / (2.0 * h);
      num += v[q] * w[q];
      den += v[q] * v[q];
    }
    lam = std::abs(num / den);
    v = w;
  }
  double wmax = 0.0;
  for (double e : v) wmax = std::max(wmax, std::abs(e));
  return std::max(lam, wmax);
}

StepResult adr_step(const ProblemSpec& prob, const DofMap& dm, std::vector<Vec3>& u, double fscale,
                    std::vector<double>& history) {
  const auto& st = prob.settings;
  StepResult res;
  const std::size_t n = dm.size();
  double mass;
  try {
    mass = 0.3 * lambda_max_estimate(prob, dm, u);
  } catch (const CollapsedBond& e) {
    return {false, 0, std::numeric_limits<double>::infinity(), 1.0, e.what()};
  }
  if (!(mass > 0.0)) mass = 1.0;
  std::vector<double> v(n, 0.0), rprev(n, 0.0);
  std::vector<Vec3> r;
  double r0 = -1.0;
  for (int it = 0;; ++it) {
    try {
      residual(prob, u, r);
    } catch (const CollapsedBond& e) {
      res.ok = false;
      res.diagnostic = e.what();
      break;
    }
    const double rn = free_norm(dm, r);
    res.residual = rn;
    if (it > 0) history.push_back(rn);
    if (r0 < 0.0) r0 = rn;
    if (rn <= st.tol * fscale) break;
    if (!std::isfinite(rn)) {
      res.ok = false;
      res.diagnostic = "non-finite residual";
      break;
    }
    if (r0 > 0.0) res.growth = std::max(res.growth, rn / r0);
    if (r0 > 0.0 && rn >= st.growth_limit * r0) {
      res.ok = false;
      res.diagnostic = "residual grew by factor " + std::to_string(rn / r0);
      break;
    }
    if (it >= st.adr_max_iter) {
      res.ok = false;
      res.diagnostic = "iteration cap reached";
      break;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const auto [i, c] = dm.dofs[q];
      if (it > 0 && v[q] != 0.0) {
        const double k = -(r[i][c] - rprev[q]) / (mass * v[q]);
        num += u[i][c] * k * u[i][c];
      }
      den += u[i][c] * u[i][c];
    }
    double damp = (den > 0.0 && num > 0.0) ? 2.0 * std::sqrt(num / den) : 0.0;
    damp = std::min(damp, 1.9);
    for (std::size_t q = 0; q < n; ++q) {
      const auto [i, c] = dm.dofs[q];
      v[q] = ((2.0 - damp) * v[q] + 2.0 * r[i][c] / mass) / (2.0 + damp);
      u[i][c] += v[q];
      rprev[q] = r[i][c];
    }
    res.iterations = it + 1;
  }
  return res;
}

}  // namespace

SolveOutcome solve_static(const ProblemSpec& prob, int steps) {
  return solve_static(prob, steps, std::vector<Vec3>(prob.model ? prob.model->size() : 0, Vec3{0.0, 0.0, 0.0}));
}

SolveOutcome solve_static(const ProblemSpec& prob, int steps, std::vector<Vec3> u) {
  prob.validate();
  if (steps < 1) throw ContractViolation("need at least one load step");
  const Model& md = *prob.model;
  if (u.size() != md.size()) throw ContractViolation("initial displacement size does not match node count");
  const DofMap dm(md, prob.bcs);
  const auto& st = prob.settings;

  SolveOutcome out;
  std::string scheme = st.scheme;
  if (scheme == "auto") scheme = static_cast<int>(dm.size()) <= st.newton_dof_limit ? "newton" : "adr";
  if (scheme != "newton" && scheme != "adr") throw ConfigError("unknown solver scheme '" + st.scheme + "'");
  out.scheme = scheme;

  double fscale = st.force_scale;
  if (!(fscale > 0.0)) {
    std::vector<Vec3> trial = u, r;
    apply_bc(trial, prob.bcs, 1.0);
    try {
      residual(prob, trial, r);
      fscale = free_norm(dm, r);
    } catch (const CollapsedBond&) {
      fscale = 0.0;
    }
    if (!std::isfinite(fscale)) fscale = 0.0;
    const double dx = md.nodes.dx;
    fscale = std::max(fscale, st.scale_floor * md.material.max_modulus() / (dx * dx));
  }
  out.force_scale = fscale;

  std::unique_ptr<NewtonSolver> ns;
  if (scheme == "newton") ns = std::make_unique<NewtonSolver>(prob, dm);

  out.converged = true;
  for (int s = 1; s <= steps; ++s) {
    apply_bc(u, prob.bcs, static_cast<double>(s) / steps);
    const StepResult sr = scheme == "newton" ? newton_step(prob, dm, *ns, u, fscale, out.residuals)
                                             : adr_step(prob, dm, u, fscale, out.residuals);
    out.steps.push_back({s, sr.iterations, sr.residual, sr.ok});
    out.total_iterations += sr.iterations;
    out.growth = std::max(out.growth, sr.growth);
    if (!sr.ok) {
      out.converged = false;
      out.failed_step = s;
      out.diagnostic = "load step " + std::to_string(s) + ": " + sr.diagnostic;
      break;
    }
  }
  out.u = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------

double dt_cap(const Model& md, double safety) {
  return safety * md.nodes.dx * std::sqrt(md.material.rho0 / md.material.max_modulus());
}

Trajectory solve_dynamic(const ProblemSpec& prob, double dt, int n_steps, const DynamicOptions& opt) {
  prob.validate();
  if (!(dt > 0.0)) throw ContractViolation("time step must be positive");
  const Model& md = *prob.model;
  const std::size_t n = md.size();
  const double rho = md.material.rho0;
  const Vec3 zero{0.0, 0.0, 0.0};

  std::vector<char> fixed(n * 3, 0);
  for (const auto& bc : prob.bcs)
    for (int id : bc.nodes)
      for (int c = 0; c < 3; ++c)
        if (bc.mask[c]) fixed[id * 3 + c] = 1;

  const bool smooth = opt.ramp_shape == RampShape::Smooth;
  auto ramp = [&](double t) {
    if (!(opt.ramp_time > 0.0) || t >= opt.ramp_time) return 1.0;
    const double s = t / opt.ramp_time;
    return smooth ? 0.5 * (1.0 - std::cos(std::numbers::pi * s)) : s;
  };
  auto ramp_rate = [&](double t) {
    if (!(opt.ramp_time > 0.0) || t > opt.ramp_time) return 0.0;
    const double s = t / opt.ramp_time;
    return smooth ? 0.5 * std::numbers::pi / opt.ramp_time * std::sin(std::numbers::pi * s) : 1.0 / opt.ramp_time;
  };

  Trajectory tr;
  std::vector<Vec3> u = opt.u0.empty() ? std::vector<Vec3>(n, zero) : opt.u0;
  std::vector<Vec3> v = opt.v0.empty() ? std::vector<Vec3>(n, zero) : opt.v0;
  if (u.size() != n || v.size() != n) throw ContractViolation("initial conditions do not match node count");
  apply_bc(u, prob.bcs, ramp(0.0));

  std::vector<Vec3> f, a(n, zero), x(n);
  auto accel = [&]() {
    for (std::size_t i = 0; i < n; ++i) x[i] = md.nodes.X[i] + u[i];
    internal_force(md, x, f);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = (1.0 / rho) * f[i];
      if (!prob.body_force.empty()) a[i] += prob.body_force[i];
      for (int c = 0; c < 3; ++c)
        if (fixed[i * 3 + c] || c >= md.dim()) a[i][c] = 0.0;
    }
  };
  auto record = [&](int step, double t) {
    tr.time.push_back(t);
    std::vector<Vec3> rs;
    for (const auto& bc : prob.bcs) {
      Vec3 s = zero;
      for (int id : bc.nodes) s += md.nodes.volume[id] * f[id];
      rs.push_back(s);
    }
    tr.reactions.push_back(std::move(rs));
    if (opt.energy_every > 0 && step % opt.energy_every == 0) {
      double ke = 0.0;
      for (std::size_t i = 0; i < n; ++i) ke += 0.5 * rho * dot(v[i], v[i]) * md.nodes.volume[i];
      tr.kinetic.push_back(ke);
      tr.strain.push_back(strain_energy(md, x));
    }
    if (opt.snapshot_every > 0 && step % opt.snapshot_every == 0) tr.snapshots.push_back({step, t, u, v});
  };

  try {
    accel();
    record(0, 0.0);
    for (int s = 1; s <= n_steps; ++s) {
      const double t = s * dt;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] += (0.5 * dt) * a[i];
        u[i] += dt * v[i];
      }
      apply_bc(u, prob.bcs, ramp(t));
      const double rate = ramp_rate(t);
      for (const auto& bc : prob.bcs)
        for (std::size_t q = 0; q < bc.nodes.size(); ++q)
          for (int c = 0; c < 3; ++c)
            if (bc.mask[c]) v[bc.nodes[q]][c] = rate * bc.target[q][c];
      for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
          if (!std::isfinite(u[i][c])) throw CollapsedBond("non-finite displacement");
      accel();
      for (std::size_t i = 0; i < n; ++i) v[i] += (0.5 * dt) * a[i];
      record(s, t);
    }
  } catch (const CollapsedBond& e) {
    tr.ok = false;
    tr.failed_step = static_cast<int>(tr.time.size());
    tr.diagnostic = std::string("step ") + std::to_string(tr.failed_step) + ": " + e.what();
  }
  tr.u = std::move(u);
  tr.v = std::move(v);
  return tr;
}

}  // namespace peristab
