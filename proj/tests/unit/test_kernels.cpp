#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "netab/error.hpp"
#include "netab/kernels.hpp"

using namespace netab;
using namespace netab::kernels;

namespace {

std::vector<Backend> simd_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (backend_supported(b)) out.push_back(b);
  }
  return out;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void expect_close(double a, double b, double scale) { EXPECT_NEAR(a, b, 1e-12 * (1.0 + scale)); }

// Lengths straddle every SIMD width and tail case.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 1001};

}  // namespace

TEST(Kernels, ScalarAlwaysSupported) {
  EXPECT_TRUE(backend_supported(Backend::Scalar));
  EXPECT_NO_THROW(table(Backend::Scalar));
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
}

TEST(Kernels, UnsupportedBackendThrows) {
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (!backend_supported(b)) {
      EXPECT_THROW(table(b), ContractViolation);
      EXPECT_THROW(force_backend(b), ContractViolation);
    }
  }
}

TEST(Kernels, ScalarMomentsMatchDirectSums) {
  std::mt19937_64 rng(1);
  const std::size_t n = 37;
  const auto u = random_vector(n, rng), v = random_vector(n, rng), w = random_vector(n, rng, 0.0, 2.0),
             r = random_vector(n, rng);
  const Moments m = table(Backend::Scalar).weighted_moments(u, v, w, r);
  double sw = 0, swuv = 0, srv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swuv += w[i] * u[i] * v[i];
    srv += r[i] * v[i];
  }
  expect_close(m.sw, sw, std::abs(sw));
  expect_close(m.swuv, swuv, std::abs(swuv));
  expect_close(m.srv, srv, std::abs(srv));
}

TEST(Kernels, UnitWeightsAndEmptyRhs) {
  const std::vector<double> u{1, 0, 1}, v{0.5, 0.25, 0};
  const Moments m = table(Backend::Scalar).weighted_moments(u, v, {}, {});
  EXPECT_EQ(m.sw, 3.0);
  EXPECT_EQ(m.swu, 2.0);
  EXPECT_EQ(m.swv, 0.75);
  EXPECT_EQ(m.sr, 0.0);
  const Mat3 g = m.gram();
  EXPECT_EQ(g(1, 2), g(2, 1));
  EXPECT_EQ(g(0, 0), 3.0);
}

TEST(Kernels, SimdMatchesScalarReference) {
  const auto& ref = table(Backend::Scalar);
  std::mt19937_64 rng(42);
  for (Backend b : simd_backends()) {
    SCOPED_TRACE(std::string(backend_name(b)));
    const auto& simd = table(b);
    for (std::size_t n : kLengths) {
      SCOPED_TRACE(n);
      const auto u = random_vector(n, rng), v = random_vector(n, rng), w = random_vector(n, rng, 0.0, 1.0),
                 r = random_vector(n, rng);
      for (bool weighted : {false, true}) {
        const Moments a = ref.weighted_moments(u, v, weighted ? w : std::vector<double>{}, r);
        const Moments c = simd.weighted_moments(u, v, weighted ? w : std::vector<double>{}, r);
        expect_close(a.sw, c.sw, std::abs(a.sw));
        expect_close(a.swu, c.swu, std::abs(a.swu));
        expect_close(a.swv, c.swv, std::abs(a.swv));
        expect_close(a.swuu, c.swuu, std::abs(a.swuu));
        expect_close(a.swuv, c.swuv, std::abs(a.swuv));
        expect_close(a.swvv, c.swvv, std::abs(a.swvv));
        expect_close(a.sr, c.sr, std::abs(a.sr));
        expect_close(a.sru, c.sru, std::abs(a.sru));
        expect_close(a.srv, c.srv, std::abs(a.srv));
      }

      std::vector<double> out_ref(n), out_simd(n);
      const Vec3 beta{0.3, -1.2, 2.5};
      ref.linear_index(beta, u, v, out_ref);
      simd.linear_index(beta, u, v, out_simd);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(out_ref[i], out_simd[i], 1e-14);

      std::vector<NodeId> idx;
      std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n == 0 ? 0 : n - 1));
      for (std::size_t k = 0; n > 0 && k < 2 * n; ++k) idx.push_back(pick(rng));
      const double gs = ref.gather_sum(u, idx);
      expect_close(gs, simd.gather_sum(u, idx), std::abs(gs) + static_cast<double>(idx.size()));

      const double cs = ref.centered_sum_squares(u, 0.7);
      expect_close(cs, simd.centered_sum_squares(u, 0.7), cs);
    }
  }
}

TEST(Kernels, ForcedScalarIsUsedByDispatch) {
  const Backend before = active_backend();
  force_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  const std::vector<double> y{1, 2, 3, 4};
  const std::vector<NodeId> idx{3, 0, 3};
  EXPECT_EQ(gather_sum(y, idx), 9.0);
  force_backend(before);
  EXPECT_EQ(active_backend(), before);
}
