#include <atomic>
#include <cstdlib>
#include <string>

#include "netab/error.hpp"
#include "tables.hpp"

namespace netab::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("NETAB_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return Backend::Scalar;
  }
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(NETAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(NETAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (!backend_supported(b)) {
    throw ContractViolation("kernel backend '" + std::string(backend_name(b)) + "' is not supported on this CPU");
  }
  current().store(b, std::memory_order_relaxed);
}

const Table& table(Backend b) {
  if (!backend_supported(b)) {
    throw ContractViolation("kernel backend '" + std::string(backend_name(b)) + "' is not supported on this CPU");
  }
  switch (b) {
#if defined(NETAB_HAVE_AVX2)
    case Backend::Avx2:
      return detail::avx2_table();
#endif
#if defined(NETAB_HAVE_NEON)
    case Backend::Neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

Mat3 Moments::gram() const {
  Mat3 m;
  m(0, 0) = sw;
  m(0, 1) = m(1, 0) = swu;
  m(0, 2) = m(2, 0) = swv;
  m(1, 1) = swuu;
  m(1, 2) = m(2, 1) = swuv;
  m(2, 2) = swvv;
  return m;
}

Moments weighted_moments(std::span<const double> u, std::span<const double> v, std::span<const double> w,
                         std::span<const double> r) {
  if (v.size() != u.size() || (!w.empty() && w.size() != u.size()) || (!r.empty() && r.size() != u.size())) {
    throw ContractViolation("weighted_moments: column lengths differ");
  }
  return table(active_backend()).weighted_moments(u, v, w, r);
}

void linear_index(const Vec3& beta, std::span<const double> u, std::span<const double> v, std::span<double> out) {
  if (u.size() != out.size() || v.size() != out.size()) {
    throw ContractViolation("linear_index: column lengths differ");
  }
  table(active_backend()).linear_index(beta, u, v, out);
}

double gather_sum(std::span<const double> y, std::span<const NodeId> idx) {
  return table(active_backend()).gather_sum(y, idx);
}

double centered_sum_squares(std::span<const double> a, double c) {
  return table(active_backend()).centered_sum_squares(a, c);
}

}  // namespace netab::kernels
