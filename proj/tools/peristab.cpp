#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "peristab/config.hpp"
#include "peristab/errors.hpp"
#include "peristab/experiments.hpp"

using namespace peristab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitVerifyFailed = 3;

using Meta = std::vector<std::pair<std::string, std::string>>;

struct Run {
  std::string command;
  std::string config_path;
  fs::path out;
  int threads = 0;
  Config cfg;
  Meta results;

  fs::path file(const std::string& name) const { return out / name; }
  void result(const std::string& key, const std::string& value) { results.push_back({"result." + key, value}); }
  void result(const std::string& key, double value) { result(key, format_double(value)); }
};

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os.precision(17);
  return os;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

SolverSettings read_solver(Config& cfg) {
  SolverSettings s;
  s.tol = cfg.get_double("solver.tol", s.tol);
  s.max_iter = cfg.get_int("solver.max_iter", s.max_iter);
  s.growth_limit = cfg.get_double("solver.growth_limit", s.growth_limit);
  s.scheme = cfg.get_string("solver.scheme", s.scheme);
  s.newton_dof_limit = cfg.get_int("solver.newton_dof_limit", s.newton_dof_limit);
  s.fd_step = cfg.get_double("solver.fd_step", s.fd_step);
  s.adr_max_iter = cfg.get_int("solver.adr_max_iter", s.adr_max_iter);
  s.force_scale = cfg.get_double("solver.force_scale", s.force_scale);
  s.scale_floor = cfg.get_double("solver.scale_floor", s.scale_floor);
  if (s.scheme != "auto" && s.scheme != "newton" && s.scheme != "adr")
    throw ConfigError("solver.scheme must be auto, newton or adr");
  return s;
}

void write_field(const fs::path& path, const NodeSet& nodes, const std::vector<Vec3>& u, const std::vector<Vec3>& v) {
  auto os = open_csv(path);
  os << "id,X,Y,Z,ux,uy,uz,vx,vy,vz\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& X = nodes.X[i];
    os << i << ',' << X[0] << ',' << X[1] << ',' << X[2] << ',' << u[i][0] << ',' << u[i][1] << ',' << u[i][2];
    for (int c = 0; c < 3; ++c) os << ',' << (v.empty() ? 0.0 : v[i][c]);
    os << '\n';
  }
}

int cmd_singular_bar(Run& run) {
  Config& c = run.cfg;
  SingularBarParams p;
  p.alpha = c.get_double("alpha", p.alpha);
  p.sigma_over_E0 = c.get_double("sigma_over_E0", p.sigma_over_E0);
  p.m = c.get_double("m", p.m);
  p.N = c.get_int("N", p.N);
  p.nodes = c.get_int("nodes", p.nodes);
  p.length = c.get_double("length", p.length);
  p.E0 = c.get_double("E0", p.E0);
  p.rho0 = c.get_double("rho0", p.rho0);
  p.fixed_layers = c.get_int("fixed_layers", p.N);
  p.load_layers = c.get_int("load_layers", p.N);
  p.steps = c.get_int("steps", p.steps);
  p.solver = read_solver(c);
  c.check_unused();

  const auto res = run_singular_bar(p);
  {
    auto os = open_csv(run.file("singular_bar.csv"));
    os << "id,X,u_norm,u_exact,strain_bar_norm\n";
    for (std::size_t i = 0; i < res.X.size(); ++i)
      os << i << ',' << res.X[i] << ',' << res.u_norm[i] << ',' << res.u_exact[i] << ',' << res.strain_bar[i] << '\n';
  }
  {
    auto os = open_csv(run.file("singular_bar_strain.csv"));
    os << "Xm,strain_norm,strain_exact\n";
    for (std::size_t i = 0; i < res.Xm.size(); ++i)
      os << res.Xm[i] << ',' << res.strain_norm[i] << ',' << res.strain_exact[i] << '\n';
  }
  {
    auto os = open_csv(run.file("singular_bar_residuals.csv"));
    os << "iteration,residual\n";
    for (std::size_t i = 0; i < res.outcome.residuals.size(); ++i) os << i << ',' << res.outcome.residuals[i] << '\n';
  }
  run.result("converged", res.outcome.converged ? "true" : "false");
  run.result("scheme", res.outcome.scheme);
  run.result("iterations", std::to_string(res.outcome.total_iterations));
  run.result("disp_error", res.disp_error);
  run.result("strain_error", res.strain_error);
  if (!res.outcome.diagnostic.empty()) run.result("diagnostic", res.outcome.diagnostic);
  std::cout << "singular-bar: converged=" << res.outcome.converged << " disp_error=" << res.disp_error
            << " strain_error=" << res.strain_error << '\n';
  if (!res.outcome.converged) {
    std::cerr << "solver diverged: " << res.outcome.diagnostic << '\n';
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_step_size(Run& run) {
  Config& c = run.cfg;
  StepSizeParams p;
  p.m = c.get_double("m", p.m);
  p.N = c.get_int("N", p.N);
  p.nodes = c.get_int("nodes", p.nodes);
  p.length = c.get_double("length", p.length);
  p.layers = c.get_int("layers", p.layers);
  p.E0 = c.get_double("E0", p.E0);
  p.strains = c.get_list("strains", p.strains);
  p.max_steps = c.get_int("max_steps", p.max_steps);
  p.uniformity_tol = c.get_double("uniformity_tol", p.uniformity_tol);
  const auto fixed_steps = c.get_list("steps", {});
  const bool search = c.get_bool("search", true);
  p.solver = read_solver(c);
  c.check_unused();

  StepSizeResult res;
  if (search) res = run_step_size(p);
  for (double strain : p.strains)
    for (double k : fixed_steps) {
      if (k < 1.0 || k != std::floor(k)) throw ConfigError("steps must be positive integers");
      res.runs.push_back(run_step_case(p, strain, static_cast<int>(k)));
    }

  bool diverged = false;
  {
    auto os = open_csv(run.file("step_size.csv"));
    os << "strain,steps,converged,homogeneous,iterations,growth,max_strain_dev,diagnostic\n";
    for (const auto& r : res.runs) {
      diverged = diverged || !r.converged;
      std::string diag = r.diagnostic;
      for (char& ch : diag)
        if (ch == ',' || ch == '\n') ch = ';';
      os << r.strain << ',' << r.steps << ',' << r.converged << ',' << r.homogeneous << ',' << r.iterations << ','
         << r.growth << ',' << r.max_strain_dev << ',' << diag << '\n';
    }
  }
  {
    auto os = open_csv(run.file("step_size_minimal.csv"));
    os << "strain,minimal_steps\n";
    for (const auto& [strain, k] : res.minimal_steps) {
      os << strain << ',' << k << '\n';
      run.result("minimal_steps@" + format_double(strain), std::to_string(k));
      std::cout << "step-size: strain=" << strain << " minimal steps=" << k << '\n';
    }
  }
  return diverged ? kExitDiverged : kExitOk;
}

int cmd_cuboid(Run& run) {
  Config& c = run.cfg;
  CuboidParams p;
  const auto ext = c.get_list("extents", {p.extents[0], p.extents[1], p.extents[2]});
  if (ext.size() != 3) throw ConfigError("extents needs three values");
  p.extents = {ext[0], ext[1], ext[2]};
  p.dx = c.get_double("dx", p.dx);
  p.N = c.get_int("N", p.N);
  p.m = c.get_double("m", p.m);
  p.lambda = c.get_double("lambda", p.lambda);
  p.mu = c.get_double("mu", p.mu);
  p.rho0 = c.get_double("rho0", p.rho0);
  p.strain = c.get_double("strain", p.strain);
  p.layers = c.get_int("layers", p.N);
  p.dt_factor = c.get_double("dt_factor", p.dt_factor);
  p.ramp_time = c.get_double("ramp_time", p.ramp_time);
  const std::string shape = c.get_string("ramp_shape", "smooth");
  if (shape != "smooth" && shape != "linear") throw ConfigError("ramp_shape must be smooth or linear");
  p.ramp_shape = shape == "smooth" ? RampShape::Smooth : RampShape::Linear;
  p.total_time = c.get_double("total_time", p.total_time);
  p.snapshots = c.get_int("snapshots", p.snapshots);
  c.check_unused();
  if (!(p.dt_factor > 0.0) || p.dt_factor > 1.0) throw ConfigError("dt_factor must be in (0, 1]");

  const auto res = run_cuboid(p);
  const Model md = cuboid_model(p);
  for (const auto& s : res.base.traj.snapshots)
    write_field(run.file("cuboid_snapshot_" + std::to_string(s.step) + ".csv"), md.nodes, s.u, s.v);
  write_field(run.file("cuboid_final.csv"), md.nodes, res.base.traj.u, res.base.traj.v);
  {
    auto os = open_csv(run.file("cuboid_force.csv"));
    os << "time,end_force,end_force_half_dt\n";
    const std::size_t n = std::min(res.base.end_force.size(), (res.half.end_force.size() + 1) / 2);
    for (std::size_t s = 0; s < n; ++s)
      os << res.base.time[s] << ',' << res.base.end_force[s] << ',' << res.half.end_force[2 * s] << '\n';
  }
  {
    auto os = open_csv(run.file("cuboid_roughness.csv"));
    os << "run,dt,ux,uy,uz\n";
    for (const auto* r : {&res.base, &res.half})
      os << (r == &res.base ? "dt" : "dt/2") << ',' << r->dt << ',' << r->roughness[0] << ',' << r->roughness[1]
         << ',' << r->roughness[2] << '\n';
  }
  run.result("nodes", std::to_string(md.size()));
  run.result("dt", res.base.dt);
  run.result("roughness_ratio", res.roughness_ratio);
  run.result("force_history_diff", res.force_history_diff);
  const bool ok = res.base.traj.ok && res.half.traj.ok;
  if (!ok) run.result("diagnostic", res.base.traj.ok ? res.half.traj.diagnostic : res.base.traj.diagnostic);
  std::cout << "cuboid: roughness ratio=" << res.roughness_ratio << " force history diff=" << res.force_history_diff
            << '\n';
  return ok ? kExitOk : kExitDiverged;
}

int cmd_dispersion(Run& run) {
  Config& c = run.cfg;
  DispersionParams p;
  p.N = c.get_int("N", p.N);
  p.dx = c.get_double("dx", p.dx);
  p.E0 = c.get_double("E0", p.E0);
  p.rho0 = c.get_double("rho0", p.rho0);
  p.m_values = c.get_list("m_values", p.m_values);
  p.u0_values = c.get_list("u0_values", p.u0_values);
  p.samples = c.get_int("samples", p.samples);
  c.check_unused();

  const auto res = run_dispersion(p);
  {
    auto os = open_csv(run.file("dispersion.csv"));
    os << "k,omega2_linear";
    for (const auto& cv : res.curves) {
      const std::string tag = "_m" + format_double(cv.m) + "_u" + format_double(cv.u0);
      os << ",omega2" << tag << ",imag" << tag << ",nonpositive" << tag;
    }
    os << '\n';
    for (std::size_t i = 0; i < res.k.size(); ++i) {
      os << res.k[i] << ',' << dispersion_linear(res.k[i], p.N, p.dx, p.E0, p.rho0);
      for (const auto& cv : res.curves) os << ',' << cv.omega2[i] << ',' << cv.imag[i] << ',' << (cv.omega2[i] <= 0.0);
      os << '\n';
    }
  }
  {
    auto os = open_csv(run.file("dispersion_zeros.csv"));
    os << "m,u0,k\n";
    for (const auto& cv : res.curves)
      for (double z : cv.zeros) os << cv.m << ',' << cv.u0 << ',' << z << '\n';
  }
  for (const auto& cv : res.curves)
    run.result("zeros_m" + format_double(cv.m) + "_u" + format_double(cv.u0), join(cv.zeros));
  return kExitOk;
}

int cmd_stability_map(Run& run) {
  Config& c = run.cfg;
  const double N = c.get_double("N", 3.0);
  const double m_min = c.get_double("m_min", -1.0), m_max = c.get_double("m_max", 2.0);
  const double a_min = c.get_double("a_min", -0.3), a_max = c.get_double("a_max", 0.3);
  const int m_count = c.get_int("m_count", 121), a_count = c.get_int("a_count", 121);
  const auto dims = c.get_list("dims", {1.0, 2.0});
  c.check_unused();
  if (a_min <= -1.0 || a_max <= a_min || m_max < m_min || m_count < 1 || a_count < 2)
    throw ConfigError("invalid stability map ranges");

  for (double d : dims) {
    const int dim = static_cast<int>(d);
    if (dim != 1 && dim != 2) throw ConfigError("stability maps exist for dims 1 and 2");
    const auto map = region_map(dim, N, {m_min, m_max}, {a_min, a_max}, m_count, a_count);
    {
      auto os = open_csv(run.file("region_" + std::to_string(dim) + "d.csv"));
      write_region_csv(os, map);
    }
    auto os = open_csv(run.file("critical_strain_" + std::to_string(dim) + "d.csv"));
    os << "m,a_cr_compression,a_cr_tension\n";
    for (double m : map.m_samples) {
      const auto lo = dim == 1 ? critical_strain_1d(m, N, a_min, 0.0) : critical_strain_2d(m, N, a_min, 0.0);
      const auto hi = dim == 1 ? critical_strain_1d(m, N, 0.0, a_max) : critical_strain_2d(m, N, 0.0, a_max);
      os << m << ',' << (lo ? format_double(*lo) : "") << ',' << (hi ? format_double(*hi) : "") << '\n';
    }
    const auto at1 = dim == 1 ? critical_strain_1d(1.0, N, a_min, 0.0) : critical_strain_2d(1.0, N, a_min, 0.0);
    if (at1) run.result("a_cr_m1_" + std::to_string(dim) + "d", *at1);
  }
  return kExitOk;
}

int cmd_verify(Run& run) {
  Config& c = run.cfg;
  const int n_min = c.get_int("N_min", 3), n_max = c.get_int("N_max", 12);
  c.check_unused();
  const auto rows = run_verify(n_min, n_max);
  int failed = 0;
  auto os = open_csv(run.file("verify.csv"));
  os << "check,value,reference,deviation,status\n";
  for (const auto& r : rows) {
    os << '"' << r.check << "\"," << r.value << ',' << r.reference << ',' << r.deviation << ',' << r.status << '\n';
    if (r.status == "fail") {
      ++failed;
      std::cout << "FAIL " << r.check << " deviation=" << r.deviation << '\n';
    }
  }
  run.result("failed_checks", std::to_string(failed));
  std::cout << "verify: " << rows.size() << " rows, " << failed << " failed\n";
  return failed ? kExitVerifyFailed : kExitOk;
}

void write_run_meta(const Run& run, int code) {
  Meta kv{{"command", run.command},
          {"version", PERISTAB_VERSION},
          {"config", run.config_path},
          {"threads", std::to_string(run.threads)}};
  for (const auto& e : run.cfg.echo()) kv.push_back(e);
  std::string d;
  for (const auto& k : run.cfg.defaulted()) d += (d.empty() ? "" : ",") + k;
  kv.push_back({"defaulted", d});
  for (const auto& r : run.results) kv.push_back(r);
  kv.push_back({"exit_code", std::to_string(code)});
  std::string stem = run.command;
  for (char& ch : stem)
    if (ch == '-') ch = '_';
  write_meta(run.file(stem + ".meta").string(), kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of peridynamic correspondence models"};
  app.require_subcommand(1);
  Run run;
  std::string out = ".";

  const std::vector<std::pair<std::string, std::string>> commands{
      {"singular-bar", "1D bar with a singular modulus under end stress"},
      {"step-size", "load-step size needed to reach a homogeneous stretch"},
      {"cuboid", "explicit dynamics of a 3D cuboid under uniaxial end displacement"},
      {"dispersion", "wave dispersion of the 1D generalized model"},
      {"stability-map", "stable and unstable regions in the (m, a) plane"},
      {"verify", "lattice sums, shape-tensor inverse and 2D block reduction checks"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", run.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--threads", run.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);
  run.command = app.get_subcommands().front()->get_name();
  run.out = out;

  int code = kExitOk;
  try {
    if (run.threads > 0) omp_set_num_threads(run.threads);
    fs::create_directories(run.out);
    if (!run.config_path.empty()) run.cfg = Config::load(run.config_path);
    std::string section = run.command;
    for (char& ch : section)
      if (ch == '-') ch = '_';
    run.cfg.use_section(section);

    if (run.command == "singular-bar")
      code = cmd_singular_bar(run);
    else if (run.command == "step-size")
      code = cmd_step_size(run);
    else if (run.command == "cuboid")
      code = cmd_cuboid(run);
    else if (run.command == "dispersion")
      code = cmd_dispersion(run);
    else if (run.command == "stability-map")
      code = cmd_stability_map(run);
    else
      code = cmd_verify(run);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  write_run_meta(run, code);
  return code;
}
