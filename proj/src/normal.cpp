#include "netab/normal.hpp"

#include <cmath>
#include <numbers>

namespace netab::normal {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
}

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double cdf(double x, double sigma) { return cdf(x / sigma); }

double log_cdf(double x) {
  if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  if (x > -20.0) return std::log(cdf(x));
  // Asymptotic expansion of the Mills ratio; next term is below 1e-10 here.
  double r = 1.0 / (x * x);
  double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return log_pdf(x) - std::log(-x) + std::log(series);
}

double inverse_mills(double x) {
  if (x > -20.0) return pdf(x) / cdf(x);
  return std::exp(log_pdf(x) - log_cdf(x));
}

}  // namespace netab::normal
