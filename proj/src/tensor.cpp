#include "peristab/tensor.hpp"

#include <algorithm>
#include <string>

#include "peristab/errors.hpp"

namespace peristab {

namespace {

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw ContractViolation("tensor dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

void require_same(int a, int b, const char* what) {
  if (a != b) throw ContractViolation(std::string(what) + ": dimension mismatch");
}

int kd(int a, int b) { return a == b ? 1 : 0; }

}  // namespace

Tensor2::Tensor2(int dim) : dim_(dim) { require_dim(dim); }

Tensor2 Tensor2::identity(int dim) {
  Tensor2 t(dim);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

Tensor2 Tensor2::outer(const Vec3& a, const Vec3& b, int dim) {
  Tensor2 t(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t(i, j) = a[i] * b[j];
  return t;
}

Tensor2& Tensor2::operator+=(const Tensor2& o) {
  require_same(dim_, o.dim_, "Tensor2 +");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator-=(const Tensor2& o) {
  require_same(dim_, o.dim_, "Tensor2 -");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Tensor2 Tensor2::transpose() const {
  Tensor2 t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(i, j) = (*this)(j, i);
  return t;
}

double Tensor2::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

double Tensor2::norm() const { return std::sqrt(double_dot(*this, *this)); }

bool Tensor2::is_symmetric(double rel_tol) const {
  const double scale = std::max(norm(), 1e-300);
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
  return true;
}

Vec3 Tensor2::apply(const Vec3& v) const {
  Vec3 r{0.0, 0.0, 0.0};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

double Tensor2::quad(const Vec3& v) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s += v[i] * (*this)(i, j) * v[j];
  return s;
}

Eigen::MatrixXd Tensor2::to_eigen() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Tensor2 Tensor2::from_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ContractViolation("Tensor2::from_eigen: matrix not square");
  Tensor2 t(static_cast<int>(m.rows()));
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) t(i, j) = m(i, j);
  return t;
}

Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
Tensor2 operator*(double s, Tensor2 a) { return a *= s; }

Tensor2 operator*(const Tensor2& a, const Tensor2& b) {
  require_same(a.dim(), b.dim(), "Tensor2 *");
  Tensor2 c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      double s = 0.0;
      for (int k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

double double_dot(const Tensor2& a, const Tensor2& b) {
  require_same(a.dim(), b.dim(), "double_dot");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
  require_same(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

// ---------------------------------------------------------------------------

Tensor4::Tensor4(int dim) : dim_(dim) { require_dim(dim); }

Tensor4 Tensor4::sym_identity(int dim) {
  Tensor4 t(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) t(i, j, k, l) = 0.5 * (kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k));
  return t;
}

Tensor4 Tensor4::dyad(const Tensor2& a, const Tensor2& b) {
  require_same(a.dim(), b.dim(), "Tensor4::dyad");
  const int d = a.dim();
  Tensor4 t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) t(i, j, k, l) = a(i, j) * b(k, l);
  return t;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  require_same(dim_, o.dim_, "Tensor4 +");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

std::array<std::array<int, 2>, 6> mandel_pairs(int dim) {
  switch (dim) {
    case 1:
      return {{{0, 0}}};
    case 2:
      return {{{0, 0}, {1, 1}, {0, 1}}};
    case 3:
      return {{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
    default:
      throw ContractViolation("mandel_pairs: bad dimension");
  }
}

Eigen::MatrixXd Tensor4::mandel() const {
  const int n = mandel_size();
  const auto p = mandel_pairs(dim_);
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a) {
    const double wa = p[a][0] == p[a][1] ? 1.0 : std::sqrt(2.0);
    for (int b = 0; b < n; ++b) {
      const double wb = p[b][0] == p[b][1] ? 1.0 : std::sqrt(2.0);
      m(a, b) = wa * wb * (*this)(p[a][0], p[a][1], p[b][0], p[b][1]);
    }
  }
  return m;
}

Tensor4 Tensor4::from_mandel(const Eigen::MatrixXd& m, int dim) {
  Tensor4 t(dim);
  const int n = t.mandel_size();
  if (m.rows() != n || m.cols() != n) throw ContractViolation("Tensor4::from_mandel: size mismatch");
  const auto p = mandel_pairs(dim);
  for (int a = 0; a < n; ++a) {
    const double wa = p[a][0] == p[a][1] ? 1.0 : std::sqrt(2.0);
    for (int b = 0; b < n; ++b) {
      const double wb = p[b][0] == p[b][1] ? 1.0 : std::sqrt(2.0);
      const double v = m(a, b) / (wa * wb);
      const int i = p[a][0], j = p[a][1], k = p[b][0], l = p[b][1];
      t(i, j, k, l) = v;
      t(j, i, k, l) = v;
      t(i, j, l, k) = v;
      t(j, i, l, k) = v;
    }
  }
  return t;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool Tensor4::is_fully_symmetric(double rel_tol) const {
  const double tol = rel_tol * std::max(max_abs(), 1e-300);
  const int d = dim_;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          std::array<int, 4> idx{i, j, k, l};
          const double ref = (*this)(i, j, k, l);
          std::sort(idx.begin(), idx.end());
          do {
            if (std::abs((*this)(idx[0], idx[1], idx[2], idx[3]) - ref) > tol) return false;
          } while (std::next_permutation(idx.begin(), idx.end()));
        }
  return true;
}

double max_abs_diff(const Tensor4& a, const Tensor4& b) {
  require_same(a.dim(), b.dim(), "max_abs_diff");
  const int d = a.dim();
  double m = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) m = std::max(m, std::abs(a(i, j, k, l) - b(i, j, k, l)));
  return m;
}

Tensor2 double_contract(const Tensor4& a, const Tensor2& b) {
  require_same(a.dim(), b.dim(), "double_contract");
  const int d = a.dim();
  Tensor2 c(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) s += a(i, j, k, l) * b(k, l);
      c(i, j) = s;
    }
  return c;
}

Tensor2 double_contract(const Tensor2& b, const Tensor4& a) {
  require_same(a.dim(), b.dim(), "double_contract");
  const int d = a.dim();
  Tensor2 c(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += b(i, j) * a(i, j, k, l);
      c(k, l) = s;
    }
  return c;
}

Tensor4 double_contract(const Tensor4& a, const Tensor4& b) {
  require_same(a.dim(), b.dim(), "double_contract");
  const int d = a.dim();
  Tensor4 c(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) s += a(i, j, k, l) * b(k, l, m, n);
          c(i, j, m, n) = s;
        }
  return c;
}

Tensor4 invert_sym4(const Tensor4& a, double condition_cap) {
  const Eigen::MatrixXd m = a.mandel();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !(smax / smin <= condition_cap))
    throw SingularShapeTensor("fourth-order tensor is singular on symmetric tensors (condition " +
                              std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
  const Eigen::MatrixXd inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  return Tensor4::from_mandel(inv, a.dim());
}

int gamma6(int i, int j, int k, int l, int r, int s) {
  auto d = kd;
  auto c = [](int a, int b) { return 1 - (a == b ? 1 : 0); };
  return d(i, j) * d(j, k) * d(k, l) * d(r, s) * c(i, s) + d(i, j) * d(j, k) * d(k, r) * d(l, s) * c(i, s) +
         d(i, j) * d(j, l) * d(l, r) * d(k, s) * c(i, s) + d(i, k) * d(k, l) * d(l, r) * d(j, s) * c(i, s) +
         d(j, k) * d(k, l) * d(l, r) * d(i, s) * c(i, j) + d(i, j) * d(j, k) * d(k, s) * d(l, r) * c(i, r) +
         d(i, j) * d(j, l) * d(l, s) * d(k, r) * c(i, r) + d(i, k) * d(k, l) * d(l, s) * d(j, r) * c(i, r) +
         d(j, k) * d(k, l) * d(l, s) * d(i, r) * c(i, j) + d(i, j) * d(j, r) * d(r, s) * d(k, l) * c(i, l) +
         d(i, k) * d(k, r) * d(r, s) * d(j, l) * c(i, l) + d(j, k) * d(k, r) * d(r, s) * d(i, l) * c(i, j) +
         d(i, l) * d(l, r) * d(r, s) * d(j, k) * c(i, k) + d(j, l) * d(l, r) * d(r, s) * d(i, k) * c(i, j) +
         d(k, l) * d(l, r) * d(r, s) * d(i, j) * c(i, s);
}

}  // namespace peristab
