#include "peristab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "peristab/errors.hpp"

namespace peristab {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Eigen::MatrixXd jacobian_fd(const Model& md, const std::vector<Vec3>& x, double eps, Exec exec) {
  if (!(eps > 0.0)) throw ContractViolation("finite-difference step must be positive");
  const int d = md.dim();
  const int n = static_cast<int>(md.size());
  Eigen::MatrixXd J(n * d, n * d);
  std::vector<Vec3> xp = x, fp, fm;
  for (int c = 0; c < n; ++c)
    for (int l = 0; l < d; ++l) {
      xp[c][l] = x[c][l] + eps;
      internal_force(md, xp, fp, exec);
      xp[c][l] = x[c][l] - eps;
      internal_force(md, xp, fm, exec);
      xp[c][l] = x[c][l];
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < d; ++k) J(r * d + k, c * d + l) = (fp[r][k] - fm[r][k]) / (2.0 * eps);
    }
  return J;
}

namespace {

Vec3 local_force(const Model& md, const std::vector<Vec3>& x, int I, std::vector<Tensor2>& nodal) {
  nodal[I] = nodal_tensor(md, x, I);
  for (const Bond& b : md.families.of(I)) nodal[b.neighbor] = nodal_tensor(md, x, b.neighbor);
  return internal_force_node(md, x, nodal, I);
}

}  // namespace

Tensor2 jacobian_fd_block(const Model& md, const std::vector<Vec3>& x, int I, int J, double eps) {
  if (!(eps > 0.0)) throw ContractViolation("finite-difference step must be positive");
  const int d = md.dim();
  Tensor2 B(d);
  std::vector<Vec3> xp = x;
  std::vector<Tensor2> nodal(md.size(), Tensor2(d));
  for (int l = 0; l < d; ++l) {
    xp[J][l] = x[J][l] + eps;
    const Vec3 fp = local_force(md, xp, I, nodal);
    xp[J][l] = x[J][l] - eps;
    const Vec3 fm = local_force(md, xp, I, nodal);
    xp[J][l] = x[J][l];
    for (int k = 0; k < d; ++k) B(k, l) = (fp[k] - fm[k]) / (2.0 * eps);
  }
  return B;
}

Tensor2 jacobian_fd_block_richardson(const Model& md, const std::vector<Vec3>& x, int I, int J, double eps) {
  Tensor2 fine = jacobian_fd_block(md, x, I, J, 0.5 * eps);
  const Tensor2 coarse = jacobian_fd_block(md, x, I, J, eps);
  fine *= 4.0;
  fine -= coarse;
  fine *= 1.0 / 3.0;
  return fine;
}

Tensor2 diag_block_analytic(const Model& md, const std::vector<Vec3>& x, int node, bool discrete) {
  if (md.material.family != ModelFamily::Generalized)
    throw ContractViolation("analytic diagonal block is derived for the generalized model");
  const int d = md.dim();
  const auto fam = md.families.of(node);
  const auto Y = deformed_bonds(fam, x, node);
  const Tensor2 F = def_grad_bar(fam, Y, md.shapes.Kinv[node]);
  for (std::size_t q = 0; q < fam.size(); ++q) {
    const Vec3 r = Y[q] - F.apply(fam[q].xi);
    if (norm(r) > 1e-9 * norm(Y[q])) throw ContractViolation("diagonal block requires a homogeneous deformation");
  }
  const double m = md.material.m;
  const Tensor4& Linv = md.shapes.Linv[node];
  const Tensor2 S = stress_generalized(seth_hill_strain(fam, Y, Linv, m), md.material, node);
  const Tensor2 M = double_contract(Linv, S);
  const Tensor4 C = stress_moduli(md.material, d, node);
  const double dvI = md.nodes.volume[node];

  Tensor2 D(d);
  for (std::size_t q = 0; q < fam.size(); ++q) {
    const Bond& b = fam[q];
    const Vec3& y = Y[q];
    const double y2 = dot(y, y);
    const double r2 = b.length * b.length;
    const double s2 = y2 / r2;
    const Vec3 n = (1.0 / b.length) * b.xi;
    const double c2 = -2.0 * b.weight * b.dv * stretch_pow(s2, m - 1.0) * M.quad(n) / r2;
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) D(k, l) += c2 * (2.0 * (m - 1.0) * y[k] * y[l] / y2 + (k == l ? 1.0 : 0.0));
    if (!discrete) continue;
    const Tensor2 A = double_contract(Tensor2::outer(n, n, d), Linv);
    const double acA = double_dot(A, double_contract(C, A));
    const double c1 = -dvI * b.weight * b.weight * b.dv * stretch_pow(s2, 2.0 * m - 1.0) * acA / (y2 * r2);
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) D(k, l) += c1 * y[k] * y[l];
  }
  return D;
}

double df1d_analytic(double m, double a, int N, double kappa, double dx) {
  double s = 0.0;
  for (int p = 1; p <= N; ++p) s += 1.0 / (static_cast<double>(p) * p);
  const double g = 1.0 + a;
  const double E = is_log_branch(m) ? std::log(g) : (std::pow(g, 2.0 * m) - 1.0) / (2.0 * m);
  return -2.0 * std::pow(g, 2.0 * m - 2.0) / (N * dx * dx) * s *
         (kappa * std::pow(g, 2.0 * m) / (4.0 * N) + (2.0 * m - 1.0) * kappa * E);
}

// ---------------------------------------------------------------------------

namespace {

double radial_integral(const InfluenceSpec& infl, double lo, double hi, double power) {
  if (!(hi > lo)) return 0.0;
  auto f = [&](double r) { return infl.weight(r) * std::pow(r, power); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-13);
}

// Unit directions with quadrature weights on the circle or sphere; exact for
// trigonometric polynomials of the degrees used here.
std::vector<std::pair<Vec3, double>> directions(int dim) {
  std::vector<std::pair<Vec3, double>> out;
  if (dim == 1) {
    out.push_back({{1.0, 0.0, 0.0}, 1.0});
    out.push_back({{-1.0, 0.0, 0.0}, 1.0});
    return out;
  }
  const int nphi = 48;
  if (dim == 2) {
    for (int i = 0; i < nphi; ++i) {
      const double t = 2.0 * kPi * i / nphi;
      out.push_back({{std::cos(t), std::sin(t), 0.0}, 2.0 * kPi / nphi});
    }
    return out;
  }
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& abs = GL::abscissa();
  const auto& wts = GL::weights();
  auto add = [&](double mu, double w) {
    const double st = std::sqrt(1.0 - mu * mu);
    for (int i = 0; i < nphi; ++i) {
      const double t = 2.0 * kPi * i / nphi;
      out.push_back({{st * std::cos(t), st * std::sin(t), mu}, w * 2.0 * kPi / nphi});
    }
  };
  for (std::size_t i = 0; i < abs.size(); ++i) {
    if (abs[i] == 0.0) {
      add(0.0, wts[i]);
    } else {
      add(abs[i], wts[i]);
      add(-abs[i], wts[i]);
    }
  }
  return out;
}

}  // namespace

double gamma_m(double m, int dim, const InfluenceSpec& infl, double r_cut) {
  if (dim < 1 || dim > 3) throw ContractViolation("dimension must be 1, 2 or 3");
  const double delta = infl.horizon;
  const double lo = dim == 3 ? 0.0 : r_cut;
  if (dim < 3 && !(r_cut > 0.0 && r_cut < delta)) throw ContractViolation("need 0 < r_cut < horizon");
  const double RL = radial_integral(infl, 0.0, delta, dim - 1.0);
  const double RG = radial_integral(infl, lo, delta, dim - 3.0);

  const auto dirs = directions(dim);
  Tensor4 L(dim);
  Tensor2 G(dim);
  for (const auto& [n, w] : dirs) {
    const double br = 2.0 * (m - 1.0) * n[0] * n[0] + 1.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        G(i, j) += w * n[i] * n[j] * br;
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) L(i, j, k, l) += w * RL * n[i] * n[j] * n[k] * n[l];
      }
  }
  const Tensor4 Linv = invert_sym4(L);
  double g = 0.0;
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q)
      for (int i = 0; i < dim; ++i) g += Linv(p, q, i, i) * G(p, q);
  return g * RG;
}

double m_critical(int dim) {
  switch (dim) {
    case 1:
      return 0.5;
    case 2:
    case 3:
      return 0.0;
    default:
      throw ContractViolation("dimension must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------------------

bool stable_1d(double m, double a, double N) {
  if (!(a > -1.0)) throw ContractViolation("need a > -1");
  if (is_log_branch(m)) return std::log1p(a) < 1.0 / (4.0 * N);
  const double c = (2.0 * m - 1.0) / (2.0 * m);
  return (1.0 / (4.0 * N) + c) * std::pow(1.0 + a, 2.0 * m) > c;
}

namespace {

template <class Pred>
std::optional<double> boundary(Pred stable, double lo, double hi) {
  const bool slo = stable(lo), shi = stable(hi);
  if (slo == shi) return std::nullopt;
  auto f = [&](double a) { return stable(a) == slo ? -1.0 : 1.0; };
  const auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(50));
  return 0.5 * (r.first + r.second);
}

}  // namespace

std::optional<double> critical_strain_1d(double m, double N, double lo, double hi) {
  return boundary([&](double a) { return stable_1d(m, a, N); }, lo, hi);
}

double bracket_2d(double m, double a, double N) {
  if (!(a > -1.0)) throw ContractViolation("need a > -1");
  if (is_log_branch(m)) return 1.0 + 2.0 * kPi * N * std::log1p(a);
  return 1.0 + 2.0 * kPi * N * (1.0 - std::pow(1.0 + a, -2.0 * m));
}

Eig2D eig_2d_hydro(double m, double a, double N, double kappa, double dx) {
  const double pref = -4.0 * (4.0 + kPi * std::log(N)) * kappa * std::pow(1.0 + a, 4.0 * m - 2.0) /
                      (kPi * kPi * N * N * dx * dx);
  const double lam = pref * bracket_2d(m, a, N);
  return {lam, lam};
}

bool stable_2d(double m, double a, double N) { return bracket_2d(m, a, N) > 0.0; }

std::optional<double> critical_strain_2d(double m, double N, double lo, double hi) {
  return boundary([&](double a) { return stable_2d(m, a, N); }, lo, hi);
}

Tensor2 diag_2d_hydro_lattice(double m, double a, int N, double kappa, double dx) {
  const double g = 1.0 + a;
  const double E = is_log_branch(m) ? std::log(g) : (std::pow(g, 2.0 * m) - 1.0) / (2.0 * m);
  Tensor2 D(2);
  for (const auto& o : lattice_offsets(2, N * N)) {
    const Vec3 xi{o[0] * dx, o[1] * dx, 0.0};
    const double r2 = dot(xi, xi);
    double sIJ = 0.0, sRS = 0.0, sS = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double t = 4.0 * xi[i] * xi[i] - r2;
      sIJ += t;
      sRS += t;
      sS += kappa * E * t;
    }
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const double t1 = -kappa * std::pow(g, 4.0 * m - 2.0) / (kPi * kPi * N * N) * xi[k] * xi[l] * sIJ * sRS /
                          (r2 * r2 * r2 * r2);
        const double t2 = -2.0 / (kPi * N) * std::pow(g, 2.0 * m - 2.0) * sS / (r2 * r2) *
                          (2.0 * (m - 1.0) * xi[k] * xi[l] / r2 + (k == l ? 1.0 : 0.0));
        D(k, l) += t1 + t2;
      }
  }
  return D;
}

std::string pattern_name(LatticePattern p) {
  switch (p) {
    case LatticePattern::InvR2:
      return "1/|xi|^2";
    case LatticePattern::X1sqR4:
      return "xi1^2/|xi|^4";
    case LatticePattern::X1sqX2sqR6:
      return "xi1^2 xi2^2/|xi|^6";
    case LatticePattern::X1p4R6:
      return "xi1^4/|xi|^6";
    case LatticePattern::X1p6R8:
      return "xi1^6/|xi|^8";
    case LatticePattern::X1p4X2sqR8:
      return "xi1^4 xi2^2/|xi|^8";
  }
  return "?";
}

LatticeSum lattice_sum(LatticePattern p, int N) {
  if (N < 1) throw ContractViolation("need N >= 1");
  LatticeSum out;
  for (const auto& o : lattice_offsets(2, N * N)) {
    const double x = o[0], y = o[1];
    const double r2 = x * x + y * y;
    switch (p) {
      case LatticePattern::InvR2:
        out.exact += 1.0 / r2;
        break;
      case LatticePattern::X1sqR4:
        out.exact += x * x / (r2 * r2);
        break;
      case LatticePattern::X1sqX2sqR6:
        out.exact += x * x * y * y / (r2 * r2 * r2);
        break;
      case LatticePattern::X1p4R6:
        out.exact += x * x * x * x / (r2 * r2 * r2);
        break;
      case LatticePattern::X1p6R8:
        out.exact += std::pow(x, 6) / std::pow(r2, 4);
        break;
      case LatticePattern::X1p4X2sqR8:
        out.exact += std::pow(x, 4) * y * y / std::pow(r2, 4);
        break;
    }
  }
  const double ln = std::log(static_cast<double>(N));
  switch (p) {
    case LatticePattern::InvR2:
      out.closed_form = 8.0 + 2.0 * kPi * ln;
      break;
    case LatticePattern::X1sqR4:
      out.closed_form = 4.0 + kPi * ln;
      break;
    case LatticePattern::X1sqX2sqR6:
      out.closed_form = kPi / 4.0 * ln;
      break;
    case LatticePattern::X1p4R6:
      out.closed_form = 4.0 + 3.0 * kPi / 4.0 * ln;
      break;
    case LatticePattern::X1p6R8:
      out.closed_form = 4.0 + 5.0 * kPi / 8.0 * ln;
      break;
    case LatticePattern::X1p4X2sqR8:
      out.closed_form = kPi / 8.0 * ln;
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------

double silling_test(std::span<const Bond> family, std::span<const Vec3> Y, std::span<const Vec3> dY,
                    const Tensor4& Linv, const Tensor2& S, const Tensor2& dS, double m) {
  if (Y.size() != family.size() || dY.size() != family.size())
    throw ContractViolation("bond, Y and dY counts differ");
  const int d = Linv.dim();
  const Tensor2 M = double_contract(Linv, S);
  const Tensor2 dM = double_contract(Linv, dS);
  double sum = 0.0;
  for (std::size_t q = 0; q < family.size(); ++q) {
    const Bond& b = family[q];
    const double y2 = dot(Y[q], Y[q]);
    const double r2 = b.length * b.length;
    const double s2 = y2 / r2;
    if (!(s2 >= kCollapseRatio * kCollapseRatio)) throw CollapsedBond("bond collapsed in stability test");
    Vec3 n = (1.0 / b.length) * b.xi;
    for (int i = d; i < 3; ++i) n[i] = 0.0;
    const double ydy = dot(Y[q], dY[q]);
    const double inner = dM.quad(n) * ydy + M.quad(n) * (2.0 * (m - 1.0) * ydy * ydy / y2 + dot(dY[q], dY[q]));
    sum += b.weight * b.dv * stretch_pow(s2, m - 1.0) / r2 * inner;
  }
  return sum;
}

double silling_test_hydrostatic(double m, double a, int dim, int N, double kappa, double eps) {
  std::vector<Bond> fam;
  for (const auto& o : lattice_offsets(dim, N * N)) {
    Bond b;
    b.offset = o;
    b.xi = {static_cast<double>(o[0]), static_cast<double>(o[1]), static_cast<double>(o[2])};
    b.length = norm(b.xi);
    b.weight = 1.0;
    b.dv = 1.0;
    fam.push_back(b);
  }
  const Tensor4 Linv = invert_sym4(shape_tensor_L(fam, dim));
  std::vector<Vec3> Y, dY;
  for (const Bond& b : fam) {
    Y.push_back((1.0 + a) * b.xi);
    dY.push_back({-eps, 0.0, 0.0});
  }
  const Tensor2 S = (kappa * a) * Tensor2::identity(dim);
  return silling_test(fam, Y, dY, Linv, S, Tensor2(dim), m);
}

// ---------------------------------------------------------------------------

RegionMap region_map(int dim, double N, std::pair<double, double> m_range, std::pair<double, double> a_range,
                     int m_count, int a_count) {
  if (dim != 1 && dim != 2) throw ContractViolation("region maps are available in 1D and 2D");
  if (m_count < 1 || a_count < 1) throw ContractViolation("region map needs at least one sample per axis");
  if (!(a_range.first > -1.0) || !(a_range.second > -1.0)) throw ContractViolation("strain samples must exceed -1");
  RegionMap rm;
  rm.dim = dim;
  rm.N = N;
  auto lin = [](std::pair<double, double> r, int n, int i) {
    return n == 1 ? r.first : r.first + (r.second - r.first) * i / (n - 1);
  };
  for (int i = 0; i < m_count; ++i) rm.m_samples.push_back(lin(m_range, m_count, i));
  for (int j = 0; j < a_count; ++j) rm.a_samples.push_back(lin(a_range, a_count, j));
  rm.stable.assign(m_count, std::vector<bool>(a_count));
  for (int i = 0; i < m_count; ++i)
    for (int j = 0; j < a_count; ++j)
      rm.stable[i][j] = dim == 1 ? stable_1d(rm.m_samples[i], rm.a_samples[j], N)
                                 : stable_2d(rm.m_samples[i], rm.a_samples[j], N);
  return rm;
}

void write_region_csv(std::ostream& os, const RegionMap& map) {
  os.precision(17);
  os << "m\\a";
  for (double a : map.a_samples) os << ',' << a;
  os << '\n';
  for (std::size_t i = 0; i < map.m_samples.size(); ++i) {
    os << map.m_samples[i];
    for (bool s : map.stable[i]) os << ',' << (s ? 1 : 0);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

DispersionPoint dispersion_omega2(double k, double u0, double m, int N, double dx, double E0, double rho0) {
  using C = std::complex<double>;
  if (u0 == 0.0) throw ContractViolation("dispersion needs a nonzero amplitude");
  const C I(0.0, 1.0);
  const double w0 = 2.0 * N * dx;
  const bool lg = is_log_branch(m);
  auto Y = [&](double X, double zeta) { return zeta + u0 * std::exp(I * k * X) * (std::exp(I * k * zeta) - 1.0); };
  auto stretch2 = [&](const C& y, double zeta) {
    const C z = y * y / (zeta * zeta);
    if (std::abs(z) < kCollapseRatio * kCollapseRatio) throw CollapsedBond("bond collapsed in dispersion probe");
    return z;
  };
  auto strain = [&](double X) {
    C e = 0.0;
    for (int p = -N; p <= N; ++p) {
      if (p == 0) continue;
      const double zeta = p * dx;
      const C z = stretch2(Y(X, zeta), zeta);
      e += dx * (lg ? 0.5 * std::log(z) : (std::pow(z, m) - 1.0) / (2.0 * m));
    }
    return e / w0;
  };
  const C S0 = E0 * strain(0.0);
  C rhs = 0.0;
  for (int p = -N; p <= N; ++p) {
    if (p == 0) continue;
    const double xi = p * dx;
    const C y = Y(0.0, xi);
    const C z = stretch2(y, xi);
    const C Sx = E0 * strain(xi);
    rhs += dx / w0 * (S0 + Sx) * std::pow(z, m - 1.0) * y / (xi * xi);
  }
  return {-rhs.real() / (rho0 * u0), -rhs.imag() / (rho0 * u0)};
}

double dispersion_linear(double k, int N, double dx, double E0, double rho0) {
  double s = 0.0;
  for (int p = 1; p <= N; ++p) s += std::sin(k * p * dx) / p;
  return E0 / (rho0 * N * N * dx * dx) * s * s;
}

std::vector<double> dispersion_zeros(const std::vector<double>& k, const std::vector<double>& w2,
                                     const std::function<double(double)>& f) {
  std::vector<double> out;
  if (k.size() < 3 || k.size() != w2.size()) return out;
  double scale = 0.0;
  for (double v : w2) scale = std::max(scale, std::abs(v));
  const double tol = 1e-8 * scale;
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    if ((w2[i] < 0.0) != (w2[i + 1] < 0.0) && i + 1 < k.size() - 1) {
      auto g = [&](double kk) { return f(kk); };
      const auto r = boost::math::tools::bisect(g, k[i], k[i + 1], boost::math::tools::eps_tolerance<double>(40));
      out.push_back(0.5 * (r.first + r.second));
      continue;
    }
    const bool local_min = std::abs(w2[i]) <= std::abs(w2[i - 1]) && std::abs(w2[i]) <= std::abs(w2[i + 1]);
    if (!local_min) continue;
    auto g = [&](double kk) { return std::abs(f(kk)); };
    const auto r = boost::math::tools::brent_find_minima(g, k[i - 1], k[i + 1], 40);
    if (r.second <= tol) out.push_back(r.first);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [&](double a, double b) { return std::abs(a - b) < 1e-9 * k.back(); }),
            out.end());
  return out;
}

}  // namespace peristab
