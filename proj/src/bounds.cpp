#include "netab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "netab/error.hpp"
#include "netab/kernels.hpp"
#include "netab/normal.hpp"

namespace netab {

namespace {

Mat3 inverse_or_throw(const Mat3& m, bool fisher) {
  SpdFactor f(m);
  if (!f.ok()) {
    const std::string what = fisher ? "Fisher information" : "design";
    const std::string msg = what + " matrix is singular (column " + std::to_string(f.deficient_column()) +
                            " is linearly dependent, condition " + std::to_string(f.condition()) + ")";
    if (fisher) throw SingularFisherError(msg, f.deficient_column());
    throw SingularDesignError(msg, f.deficient_column());
  }
  return f.inverse();
}

Mat3 gram(const DesignMatrix& x) {
  return kernels::weighted_moments(x.treated, x.exposure, {}, {}).gram();
}

BoundResult quadratic_bound(const Mat3& covariance, const Vec3& c, bool asymptotic) {
  BoundResult b;
  b.gradient = c;
  b.crlb = std::max(0.0, quadratic_form(c, covariance));
  b.asymptotic = asymptotic;
  return b;
}

template <class WeightFn>
FisherInfo weighted_fim(const DesignMatrix& x, const Vec3& beta, ModelKind model, WeightFn weight) {
  std::vector<double> w(x.rows());
  kernels::linear_index(beta, x.treated, x.exposure, w);
  for (double& v : w) v = weight(v);
  FisherInfo f;
  f.matrix = kernels::weighted_moments(x.treated, x.exposure, w, {}).gram();
  f.model = model;
  f.evaluated_at = beta;
  return f;
}

}  // namespace

double probit_fisher_weight(double s) {
  // phi^2 / (Phi (1 - Phi)) in logs; the direct form is 0/0 beyond |s| ~ 38.
  return std::exp(2.0 * normal::log_pdf(s) - normal::log_cdf(s) - normal::log_cdf(-s));
}

double logit_fisher_weight(double s) {
  const double e = std::exp(-std::abs(s));
  return e / ((1.0 + e) * (1.0 + e));
}

BoundResult crlb_linear(const DesignMatrix& x, double sigma2) {
  if (!(sigma2 > 0.0)) throw ContractViolation("crlb_linear: sigma2 must be positive");
  return quadratic_bound(inverse_or_throw(gram(x), false) * sigma2, {0.0, 1.0, 1.0}, false);
}

FisherInfo fim_probit(const DesignMatrix& x, const Vec3& beta) {
  return weighted_fim(x, beta, ModelKind::Probit, probit_fisher_weight);
}

FisherInfo fim_logit(const DesignMatrix& x, const Vec3& beta) {
  return weighted_fim(x, beta, ModelKind::Logistic, logit_fisher_weight);
}

Vec3 probit_ate_gradient(const Vec3& beta) {
  const double all = normal::pdf(beta[0] + beta[1] + beta[2]);
  return {all - normal::pdf(beta[0]), all, all};
}

Vec3 logit_ate_gradient(const Vec3& beta) {
  const double all = logit_fisher_weight(beta[0] + beta[1] + beta[2]);
  return {all - logit_fisher_weight(beta[0]), all, all};
}

BoundResult crlb_probit(const DesignMatrix& x, const Vec3& beta) {
  const Mat3 inv = inverse_or_throw(fim_probit(x, beta).matrix, true);
  return quadratic_bound(inv, probit_ate_gradient(beta), true);
}

BoundResult crlb_logit(const DesignMatrix& x, const Vec3& beta) {
  const Mat3 inv = inverse_or_throw(fim_logit(x, beta).matrix, true);
  return quadratic_bound(inv, logit_ate_gradient(beta), true);
}

TauBoundResult crlb_tau(const DesignMatrix& x_tau, double sigma2) {
  if (!(sigma2 >= 0.0)) throw ContractViolation("crlb_tau: sigma2 must be non-negative");
  const Mat3 cov = inverse_or_throw(gram(x_tau), false) * sigma2;
  return {quadratic_bound(cov, {0.0, 1.0, 0.0}, false), quadratic_bound(cov, {0.0, 1.0, 1.0}, false)};
}

double mse_tau_closed(double sigma2, std::size_t n_c1, std::size_t n_c0) {
  if (n_c1 == 0 || n_c0 == 0) throw EmptyExposureClassError(n_c1, n_c0);
  return sigma2 / static_cast<double>(n_c1) + sigma2 / static_cast<double>(n_c0);
}

double mse_taubin_closed(const ModelParams& params, std::size_t n_c1, std::size_t n_c0) {
  if (n_c1 == 0 || n_c0 == 0) throw EmptyExposureClassError(n_c1, n_c0);
  const double p1 = normal::cdf(params.beta[0] + params.beta[1], params.sigma);
  const double p0 = normal::cdf(params.beta[0], params.sigma);
  return p1 * (1.0 - p1) / static_cast<double>(n_c1) + p0 * (1.0 - p0) / static_cast<double>(n_c0);
}

double delta_method(const Vec3& gradient, const Mat3& covariance) {
  if (!covariance.is_symmetric()) throw ContractViolation("delta_method: covariance is not symmetric");
  return quadratic_form(gradient, covariance);
}

}  // namespace netab
