#include <cstddef>

#include "tables.hpp"

namespace netab::kernels::detail {
namespace {

Moments moments_scalar(std::span<const double> u, std::span<const double> v, std::span<const double> w,
                       std::span<const double> r) {
  Moments m;
  const std::size_t n = u.size();
  const bool weighted = !w.empty();
  const bool with_rhs = !r.empty();
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weighted ? w[i] : 1.0;
    const double wu = wi * u[i];
    const double wv = wi * v[i];
    m.sw += wi;
    m.swu += wu;
    m.swv += wv;
    m.swuu += wu * u[i];
    m.swuv += wu * v[i];
    m.swvv += wv * v[i];
    if (with_rhs) {
      m.sr += r[i];
      m.sru += r[i] * u[i];
      m.srv += r[i] * v[i];
    }
  }
  return m;
}

void linear_index_scalar(const Vec3& beta, std::span<const double> u, std::span<const double> v,
                         std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = beta[0] + beta[1] * u[i] + beta[2] * v[i];
}

double gather_sum_scalar(std::span<const double> y, std::span<const NodeId> idx) {
  double s = 0.0;
  for (NodeId i : idx) s += y[i];
  return s;
}

double centered_sum_squares_scalar(std::span<const double> a, double c) {
  double s = 0.0;
  for (double x : a) s += (x - c) * (x - c);
  return s;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{moments_scalar, linear_index_scalar, gather_sum_scalar, centered_sum_squares_scalar};
  return t;
}

}  // namespace netab::kernels::detail
