// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and must only
// be entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <cstddef>

#include "tables.hpp"

namespace netab::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

Moments moments_avx2(std::span<const double> u, std::span<const double> v, std::span<const double> w,
                     std::span<const double> r) {
  const std::size_t n = u.size();
  const bool weighted = !w.empty();
  const bool with_rhs = !r.empty();

  __m256d sw = _mm256_setzero_pd(), swu = sw, swv = sw, swuu = sw, swuv = sw, swvv = sw;
  __m256d sr = sw, sru = sw, srv = sw;
  const __m256d ones = _mm256_set1_pd(1.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_loadu_pd(u.data() + i);
    const __m256d vi = _mm256_loadu_pd(v.data() + i);
    const __m256d wi = weighted ? _mm256_loadu_pd(w.data() + i) : ones;
    const __m256d wu = _mm256_mul_pd(wi, ui);
    const __m256d wv = _mm256_mul_pd(wi, vi);
    sw = _mm256_add_pd(sw, wi);
    swu = _mm256_add_pd(swu, wu);
    swv = _mm256_add_pd(swv, wv);
    swuu = _mm256_fmadd_pd(wu, ui, swuu);
    swuv = _mm256_fmadd_pd(wu, vi, swuv);
    swvv = _mm256_fmadd_pd(wv, vi, swvv);
    if (with_rhs) {
      const __m256d ri = _mm256_loadu_pd(r.data() + i);
      sr = _mm256_add_pd(sr, ri);
      sru = _mm256_fmadd_pd(ri, ui, sru);
      srv = _mm256_fmadd_pd(ri, vi, srv);
    }
  }

  Moments m;
  m.sw = hsum(sw);
  m.swu = hsum(swu);
  m.swv = hsum(swv);
  m.swuu = hsum(swuu);
  m.swuv = hsum(swuv);
  m.swvv = hsum(swvv);
  m.sr = hsum(sr);
  m.sru = hsum(sru);
  m.srv = hsum(srv);

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

void linear_index_avx2(const Vec3& beta, std::span<const double> u, std::span<const double> v,
                       std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d b0 = _mm256_set1_pd(beta[0]);
  const __m256d b1 = _mm256_set1_pd(beta[1]);
  const __m256d b2 = _mm256_set1_pd(beta[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_fmadd_pd(b1, _mm256_loadu_pd(u.data() + i), b0);
    s = _mm256_fmadd_pd(b2, _mm256_loadu_pd(v.data() + i), s);
    _mm256_storeu_pd(out.data() + i, s);
  }
  for (; i < n; ++i) out[i] = beta[0] + beta[1] * u[i] + beta[2] * v[i];
}

double gather_sum_avx2(std::span<const double> y, std::span<const NodeId> idx) {
  const std::size_t n = idx.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx.data() + i));
    // Node ids fit in int32 for any graph this library can hold in memory.
    acc = _mm256_add_pd(acc, _mm256_i32gather_pd(y.data(), ix, 8));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += y[idx[i]];
  return s;
}

double centered_sum_squares_avx2(std::span<const double> a, double c) {
  const std::size_t n = a.size();
  const __m256d cv = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), cv);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (a[i] - c) * (a[i] - c);
  return s;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{moments_avx2, linear_index_avx2, gather_sum_avx2, centered_sum_squares_avx2};
  return t;
}

}  // namespace netab::kernels::detail
