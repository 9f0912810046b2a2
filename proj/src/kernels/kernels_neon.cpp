// NEON variants for AArch64, where Advanced SIMD is part of the base ISA.

#include <arm_neon.h>

#include <cstddef>

#include "tables.hpp"

namespace netab::kernels::detail {
namespace {

Moments moments_neon(std::span<const double> u, std::span<const double> v, std::span<const double> w,
                     std::span<const double> r) {
  const std::size_t n = u.size();
  const bool weighted = !w.empty();
  const bool with_rhs = !r.empty();

  float64x2_t sw = vdupq_n_f64(0.0), swu = sw, swv = sw, swuu = sw, swuv = sw, swvv = sw;
  float64x2_t sr = sw, sru = sw, srv = sw;
  const float64x2_t ones = vdupq_n_f64(1.0);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ui = vld1q_f64(u.data() + i);
    const float64x2_t vi = vld1q_f64(v.data() + i);
    const float64x2_t wi = weighted ? vld1q_f64(w.data() + i) : ones;
    const float64x2_t wu = vmulq_f64(wi, ui);
    const float64x2_t wv = vmulq_f64(wi, vi);
    sw = vaddq_f64(sw, wi);
    swu = vaddq_f64(swu, wu);
    swv = vaddq_f64(swv, wv);
    swuu = vfmaq_f64(swuu, wu, ui);
    swuv = vfmaq_f64(swuv, wu, vi);
    swvv = vfmaq_f64(swvv, wv, vi);
    if (with_rhs) {
      const float64x2_t ri = vld1q_f64(r.data() + i);
      sr = vaddq_f64(sr, ri);
      sru = vfmaq_f64(sru, ri, ui);
      srv = vfmaq_f64(srv, ri, vi);
    }
  }

  Moments m;
  m.sw = vaddvq_f64(sw);
  m.swu = vaddvq_f64(swu);
  m.swv = vaddvq_f64(swv);
  m.swuu = vaddvq_f64(swuu);
  m.swuv = vaddvq_f64(swuv);
  m.swvv = vaddvq_f64(swvv);
  m.sr = vaddvq_f64(sr);
  m.sru = vaddvq_f64(sru);
  m.srv = vaddvq_f64(srv);

  for (; i < n; ++i) {
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

void linear_index_neon(const Vec3& beta, std::span<const double> u, std::span<const double> v,
                       std::span<double> out) {
  const std::size_t n = out.size();
  const float64x2_t b0 = vdupq_n_f64(beta[0]);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t s = vfmaq_n_f64(b0, vld1q_f64(u.data() + i), beta[1]);
    s = vfmaq_n_f64(s, vld1q_f64(v.data() + i), beta[2]);
    vst1q_f64(out.data() + i, s);
  }
  for (; i < n; ++i) out[i] = beta[0] + beta[1] * u[i] + beta[2] * v[i];
}

double gather_sum_neon(std::span<const double> y, std::span<const NodeId> idx) {
  // No gather instruction; two independent lanes still break the add chain.
  const std::size_t n = idx.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double pair[2] = {y[idx[i]], y[idx[i + 1]]};
    acc = vaddq_f64(acc, vld1q_f64(pair));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += y[idx[i]];
  return s;
}

double centered_sum_squares_neon(std::span<const double> a, double c) {
  const std::size_t n = a.size();
  const float64x2_t cv = vdupq_n_f64(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a.data() + i), cv);
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += (a[i] - c) * (a[i] - c);
  return s;
}

}  // namespace

const Table& neon_table() {
  static const Table t{moments_neon, linear_index_neon, gather_sum_neon, centered_sum_squares_neon};
  return t;
}

}  // namespace netab::kernels::detail
