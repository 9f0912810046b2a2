#pragma once

#include <span>

namespace netab {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Unbiased (n - 1) variance; 0 when n < 2.
  double variance = 0.0;
};

SampleSummary summarize(std::span<const double> xs);
/// Sample skewness g1 = m3 / m2^{3/2} using population moments.
double skewness(std::span<const double> xs);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom. Both
/// samples need at least two points (ContractViolation otherwise). When both
/// variances vanish the test is undefined and p = 1 is returned.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

}  // namespace netab
