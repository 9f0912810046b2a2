#pragma once

#include <cstddef>

#include "netab/estimators.hpp"
#include "netab/linalg3.hpp"
#include "netab/response_models.hpp"

namespace netab {

/// Fisher information about beta carried by one design.
struct FisherInfo {
  Mat3 matrix;
  ModelKind model = ModelKind::Probit;
  Vec3 evaluated_at{};
};

struct BoundResult {
  double crlb = 0.0;
  /// Gradient of the ATE functional with respect to beta.
  Vec3 gradient{};
  /// Asymptotic bounds apply to the likelihood models only.
  bool asymptotic = false;
};

/// The threshold-model bound for two functionals of beta: beta1 alone (the
/// ATE of the threshold model) and beta1 + beta2.
struct TauBoundResult {
  BoundResult beta1;
  BoundResult beta1_plus_beta2;
};

/// Lower bound c^T sigma^2 (X^T X)^{-1} c with c = (0, 1, 1).
BoundResult crlb_linear(const DesignMatrix& x, double sigma2);

/// sum_i phi(s_i)^2 / (Phi(s_i)(1 - Phi(s_i))) x_i x_i^T, s_i = x_i^T beta.
FisherInfo fim_probit(const DesignMatrix& x, const Vec3& beta);
/// X^T W X with W_ii = e^{s_i} / (1 + e^{s_i})^2.
FisherInfo fim_logit(const DesignMatrix& x, const Vec3& beta);

/// Gradient of Phi(b0 + b1 + b2) - Phi(b0).
Vec3 probit_ate_gradient(const Vec3& beta);
/// Gradient of sigmoid(b0 + b1 + b2) - sigmoid(b0).
Vec3 logit_ate_gradient(const Vec3& beta);

BoundResult crlb_probit(const DesignMatrix& x, const Vec3& beta);
BoundResult crlb_logit(const DesignMatrix& x, const Vec3& beta);
/// Bound on the threshold design (see build_design_tau).
TauBoundResult crlb_tau(const DesignMatrix& x_tau, double sigma2);

/// sigma^2 / |C1| + sigma^2 / |C0|
double mse_tau_closed(double sigma2, std::size_t n_c1, std::size_t n_c0);
/// Bernoulli variances of the binary threshold model, summed per class.
double mse_taubin_closed(const ModelParams& params, std::size_t n_c1, std::size_t n_c0);

/// g^T C g; throws ContractViolation when C is not symmetric.
double delta_method(const Vec3& gradient, const Mat3& covariance);

/// Per-row Fisher weights, exposed for tail-behaviour tests.
double probit_fisher_weight(double s);
double logit_fisher_weight(double s);

}  // namespace netab
