#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace peristab {

/// Point/vector in up to three dimensions. Components beyond the problem
/// dimension are kept at zero so full 3-component sums are always valid.
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Dense second-order tensor in dimension 1, 2 or 3.
class Tensor2 {
 public:
  explicit Tensor2(int dim = 3);

  static Tensor2 zero(int dim) { return Tensor2(dim); }
  static Tensor2 identity(int dim);
  static Tensor2 outer(const Vec3& a, const Vec3& b, int dim);

  int dim() const { return dim_; }
  double& operator()(int i, int j) { return a_[3 * i + j]; }
  double operator()(int i, int j) const { return a_[3 * i + j]; }

  Tensor2& operator+=(const Tensor2& o);
  Tensor2& operator-=(const Tensor2& o);
  Tensor2& operator*=(double s);

  Tensor2 transpose() const;
  double trace() const;
  double norm() const;  // Frobenius
  bool is_symmetric(double rel_tol = 0.0) const;
  Vec3 apply(const Vec3& v) const;  // A v
  /// v . A v
  double quad(const Vec3& v) const;

  Eigen::MatrixXd to_eigen() const;
  static Tensor2 from_eigen(const Eigen::MatrixXd& m);

 private:
  int dim_;
  std::array<double, 9> a_{};
};

Tensor2 operator+(Tensor2 a, const Tensor2& b);
Tensor2 operator-(Tensor2 a, const Tensor2& b);
Tensor2 operator*(double s, Tensor2 a);
Tensor2 operator*(const Tensor2& a, const Tensor2& b);
double double_dot(const Tensor2& a, const Tensor2& b);  // a_ij b_ij
double max_abs_diff(const Tensor2& a, const Tensor2& b);

/// Dense fourth-order tensor in dimension 1, 2 or 3. Inversion and the Mandel
/// view assume the minor symmetries A_ijkl = A_jikl = A_ijlk.
class Tensor4 {
 public:
  explicit Tensor4(int dim = 3);

  /// Symmetric fourth-order identity, (d_ik d_jl + d_il d_jk) / 2.
  static Tensor4 sym_identity(int dim);
  /// a_ij b_kl
  static Tensor4 dyad(const Tensor2& a, const Tensor2& b);

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k, int l) { return a_[27 * i + 9 * j + 3 * k + l]; }
  double operator()(int i, int j, int k, int l) const { return a_[27 * i + 9 * j + 3 * k + l]; }

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator*=(double s);

  /// Size of the Mandel representation, d(d+1)/2.
  int mandel_size() const { return dim_ * (dim_ + 1) / 2; }
  Eigen::MatrixXd mandel() const;
  static Tensor4 from_mandel(const Eigen::MatrixXd& m, int dim);

  /// Invariance under every permutation of (i,j,k,l), to rel_tol of the max entry.
  bool is_fully_symmetric(double rel_tol = 0.0) const;
  double max_abs() const;

 private:
  int dim_;
  std::array<double, 81> a_{};
};

double max_abs_diff(const Tensor4& a, const Tensor4& b);

/// (A:B)_ij = A_ijkl B_kl.
Tensor2 double_contract(const Tensor4& a, const Tensor2& b);
/// (B:A)_kl = B_ij A_ijkl.
Tensor2 double_contract(const Tensor2& b, const Tensor4& a);
/// (A:B)_ijmn = A_ijkl B_klmn.
Tensor4 double_contract(const Tensor4& a, const Tensor4& b);

inline constexpr double kDefaultConditionCap = 1e12;

/// Inverse of A on the space of symmetric second-order tensors, computed in
/// the orthonormal Mandel basis. Throws SingularShapeTensor when the Mandel
/// matrix condition number exceeds `condition_cap`.
Tensor4 invert_sym4(const Tensor4& a, double condition_cap = kDefaultConditionCap);

/// Index pattern of the sixth moment of a point-symmetric square lattice:
/// the 15-term Kronecker-delta combination selecting index tuples in which
/// one value appears four times and another twice. Indices are 0-based.
int gamma6(int i, int j, int k, int l, int r, int s);

/// Pairs (i,j) spanning the Mandel basis for the given dimension.
std::array<std::array<int, 2>, 6> mandel_pairs(int dim);

}  // namespace peristab
