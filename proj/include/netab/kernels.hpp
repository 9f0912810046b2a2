#pragma once

// Data-parallel inner loops shared by the estimators and bounds.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is chosen once at
// startup from the CPU's capabilities; NETAB_KERNELS=scalar in the
// environment, or force_backend(), pins the scalar path. Variants agree with
// the reference up to summation-order rounding.

#include <cstdint>
#include <span>
#include <string_view>

#include "netab/graph.hpp"
#include "netab/linalg3.hpp"

namespace netab::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
/// Throws ContractViolation when `b` is not supported on this machine.
void force_backend(Backend b);

/// Weighted second moments of the rows (1, u_i, v_i), i.e. X^T W X and X^T W r.
struct Moments {
  double sw = 0, swu = 0, swv = 0, swuu = 0, swuv = 0, swvv = 0;
  double sr = 0, sru = 0, srv = 0;

  Mat3 gram() const;
  Vec3 rhs() const { return {sr, sru, srv}; }
};

/// Empty `w` means unit weights; empty `r` leaves the rhs sums at zero.
Moments weighted_moments(std::span<const double> u, std::span<const double> v, std::span<const double> w,
                         std::span<const double> r);

/// out_i = b0 + b1 u_i + b2 v_i
void linear_index(const Vec3& beta, std::span<const double> u, std::span<const double> v, std::span<double> out);

/// Sum of y over the listed indices.
double gather_sum(std::span<const double> y, std::span<const NodeId> idx);

/// Sum of squares of (a_i - c).
double centered_sum_squares(std::span<const double> a, double c);

// Per-backend entry points, exposed for equivalence testing.
struct Table {
  Moments (*weighted_moments)(std::span<const double>, std::span<const double>, std::span<const double>,
                              std::span<const double>);
  void (*linear_index)(const Vec3&, std::span<const double>, std::span<const double>, std::span<double>);
  double (*gather_sum)(std::span<const double>, std::span<const NodeId>);
  double (*centered_sum_squares)(std::span<const double>, double);
};

/// Throws ContractViolation when `b` is not supported on this machine.
const Table& table(Backend b);

}  // namespace netab::kernels
