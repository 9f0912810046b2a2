#pragma once

namespace netab::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double pdf(double x);
double log_pdf(double x);
/// Standard normal CDF Phi(x).
double cdf(double x);
/// log Phi(x), accurate far into both tails.
double log_cdf(double x);
/// CDF of N(0, sigma^2).
double cdf(double x, double sigma);

/// phi(x) / Phi(x) without 0/0 in the lower tail.
double inverse_mills(double x);

}  // namespace netab::normal
