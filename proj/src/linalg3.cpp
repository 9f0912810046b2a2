#include "netab/linalg3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netab {

Mat3 Mat3::identity() { return diagonal({1.0, 1.0, 1.0}); }

Mat3 Mat3::diagonal(const Vec3& d) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

Mat3 Mat3::operator*(double k) const {
  Mat3 m = *this;
  for (double& v : m.a) v *= k;
  return m;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 m = *this;
  for (std::size_t i = 0; i < 9; ++i) m.a[i] += o.a[i];
  return m;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) {
    r[static_cast<std::size_t>(i)] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
  }
  return r;
}

bool Mat3::is_symmetric(double rel_tol) const {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    }
  }
  return true;
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double quadratic_form(const Vec3& v, const Mat3& m) { return dot(v, m * v); }

Vec3 symmetric_eigenvalues(const Mat3& m) {
  Mat3 s = m;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
    double diag = s(0, 0) * s(0, 0) + s(1, 1) * s(1, 1) + s(2, 2) * s(2, 2);
    if (off <= 1e-30 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (s(p, q) == 0.0) continue;
        double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (int k = 0; k < 3; ++k) {
          double skp = s(k, p);
          double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < 3; ++k) {
          double spk = s(p, k);
          double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  Vec3 ev{s(0, 0), s(1, 1), s(2, 2)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

SpdFactor::SpdFactor(const Mat3& m) {
  for (int j = 0; j < 3; ++j) {
    if (m(j, j) == 0.0 && m(j, 0) == 0.0 && m(j, 1) == 0.0 && m(j, 2) == 0.0) {
      deficient_ = j;
      condition_ = std::numeric_limits<double>::infinity();
      return;
    }
  }

  for (int j = 0; j < 3; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k) * pivots_[static_cast<std::size_t>(k)];
    pivots_[static_cast<std::size_t>(j)] = d;
    if (!(d > 1e-14 * std::abs(m(j, j)))) {
      deficient_ = j;
      condition_ = std::numeric_limits<double>::infinity();
      return;
    }
    for (int i = j + 1; i < 3; ++i) {
      double v = m(i, j);
      for (int k = 0; k < j; ++k) v -= lower_(i, k) * lower_(j, k) * pivots_[static_cast<std::size_t>(k)];
      lower_(i, j) = v / d;
    }
  }

  Vec3 ev = symmetric_eigenvalues(m);
  condition_ = ev[0] > 0.0 ? ev[2] / ev[0] : std::numeric_limits<double>::infinity();
  if (condition_ > kMaxCondition) {
    int worst = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int j = 1; j < 3; ++j) {
      double ratio = pivots_[static_cast<std::size_t>(j)] / m(j, j);
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst = j;
      }
    }
    deficient_ = worst;
  }
}

Vec3 SpdFactor::solve(const Vec3& b) const {
  Vec3 y = b;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < i; ++k) y[static_cast<std::size_t>(i)] -= lower_(i, k) * y[static_cast<std::size_t>(k)];
  }
  for (std::size_t i = 0; i < 3; ++i) y[i] /= pivots_[i];
  for (int i = 2; i >= 0; --i) {
    for (int k = i + 1; k < 3; ++k) y[static_cast<std::size_t>(i)] -= lower_(k, i) * y[static_cast<std::size_t>(k)];
  }
  return y;
}

Mat3 SpdFactor::inverse() const {
  Mat3 inv;
  for (int c = 0; c < 3; ++c) {
    Vec3 e{};
    e[static_cast<std::size_t>(c)] = 1.0;
    Vec3 col = solve(e);
    for (int r = 0; r < 3; ++r) inv(r, c) = col[static_cast<std::size_t>(r)];
  }
  // Symmetrize away rounding.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  }
  return inv;
}

}  // namespace netab
