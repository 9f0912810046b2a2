#pragma once

#include <array>
#include <cstddef>

namespace netab {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }

  static Mat3 identity();
  static Mat3 diagonal(const Vec3& d);

  Mat3 operator*(double k) const;
  Mat3 operator+(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  bool is_symmetric(double rel_tol = 1e-12) const;
};

double dot(const Vec3& u, const Vec3& v);
double quadratic_form(const Vec3& v, const Mat3& m);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Vec3 symmetric_eigenvalues(const Mat3& m);

/// L D L^T factorization of a symmetric positive definite 3x3 matrix.
///
/// A matrix is rejected when its eigenvalue condition number exceeds
/// kMaxCondition or a pivot is not positive. The deficient column is the
/// first one whose pivot, relative to its own diagonal entry, collapses; an
/// all-zero column is reported directly.
class SpdFactor {
 public:
  static constexpr double kMaxCondition = 1e12;

  explicit SpdFactor(const Mat3& m);

  bool ok() const { return deficient_ < 0; }
  int deficient_column() const { return deficient_; }
  double condition() const { return condition_; }

  Vec3 solve(const Vec3& b) const;
  Mat3 inverse() const;

 private:
  Mat3 lower_ = Mat3::identity();
  Vec3 pivots_{};
  double condition_ = 0.0;
  int deficient_ = -1;
};

}  // namespace netab
