#include "netab/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "netab/error.hpp"
#include "netab/kernels.hpp"
#include "netab/normal.hpp"

namespace netab {

namespace {

constexpr const char* kColumnNames[] = {"intercept", "treatment", "exposure"};

// Ties on rational fractions such as 17/20 vs tau = 0.85 resolve toward the
// saturated class.
constexpr double kTieSlack = 1e-12;

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ContractViolation(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                            std::to_string(b) + ")");
  }
}

SpdFactor factor_design(const Mat3& gram, const char* what) {
  SpdFactor f(gram);
  if (!f.ok()) {
    const int c = f.deficient_column();
    throw SingularDesignError(std::string(what) + ": singular design, column " + std::to_string(c) + " (" +
                                  kColumnNames[c] + ") is linearly dependent on the others",
                              c);
  }
  return f;
}

double logistic(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + e^s)
double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

void check_binary(std::span<const double> y) {
  std::size_t ones = 0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw ContractViolation("binary estimator requires responses in {0, 1}");
    ones += v == 1.0 ? 1 : 0;
  }
  if (ones == 0 || ones == y.size()) {
    throw DegenerateResponseError("binary response contains a single class (" + std::to_string(ones) + " of " +
                                  std::to_string(y.size()) + " are 1)");
  }
}

double mean_over(std::span<const double> y, std::span<const NodeId> idx) {
  return kernels::gather_sum(y, idx) / static_cast<double>(idx.size());
}

// Per-row log-likelihood contribution, score multiplier and negative Hessian weight.
struct RowTerms {
  double loglik;
  double score;
  double weight;
};

RowTerms probit_terms(double s, double y) {
  if (y == 1.0) {
    const double lam = normal::inverse_mills(s);
    return {normal::log_cdf(s), lam, lam * (lam + s)};
  }
  const double lam = normal::inverse_mills(-s);
  return {normal::log_cdf(-s), -lam, lam * (lam - s)};
}

RowTerms logit_terms(double s, double y) {
  const double p = logistic(s);
  return {y * s - softplus(s), y - p, p * (1.0 - p)};
}

struct Evaluation {
  double loglik = 0.0;
  kernels::Moments moments;
};

template <class Terms>
class NewtonSolver {
 public:
  NewtonSolver(const DesignMatrix& x, std::span<const double> y, Terms terms)
      : x_(x), y_(y), terms_(terms), s_(x.rows()), w_(x.rows()), r_(x.rows()) {}

  double log_likelihood(const Vec3& beta) {
    kernels::linear_index(beta, x_.treated, x_.exposure, s_);
    double ll = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i) ll += terms_(s_[i], y_[i]).loglik;
    return ll;
  }

  Evaluation evaluate(const Vec3& beta) {
    kernels::linear_index(beta, x_.treated, x_.exposure, s_);
    Evaluation e;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const RowTerms t = terms_(s_[i], y_[i]);
      e.loglik += t.loglik;
      w_[i] = t.weight;
      r_[i] = t.score;
    }
    e.moments = kernels::weighted_moments(x_.treated, x_.exposure, w_, r_);
    return e;
  }

  EstimationResult solve(const MleOptions& opt) {
    EstimationResult res;
    Vec3 beta{0.0, 0.0, 0.0};
    Evaluation cur = evaluate(beta);
    res.converged = false;
    int it = 0;
    for (;; ++it) {
      const Vec3 grad = cur.moments.rhs();
      const double gnorm = std::max({std::abs(grad[0]), std::abs(grad[1]), std::abs(grad[2])});
      // At beta = 0 every weight is positive, so a singular matrix there is a
      // property of the design. Later it means the weights have vanished.
      const SpdFactor info(cur.moments.gram());
      if (!info.ok() && it == 0) factor_design(cur.moments.gram(), "maximum likelihood");
      if (!info.ok()) {
        res.warning = "information matrix vanished at coefficient norm " + std::to_string(std::sqrt(dot(beta, beta))) +
                      ": complete or quasi-complete separation";
        break;
      }
      const Vec3 step = info.solve(grad);
      const double snorm = std::max({std::abs(step[0]), std::abs(step[1]), std::abs(step[2])});
      // Under separation the score decays towards zero while the Newton step
      // stays of order one, so both must be small.
      if (gnorm < opt.gradient_tolerance && snorm < opt.step_tolerance) {
        res.converged = true;
        break;
      }
      if (it >= opt.max_iterations) {
        res.warning = "no convergence after " + std::to_string(it) + " iterations (gradient " +
                      std::to_string(gnorm) + ")";
        break;
      }

      // Step halving while the likelihood decreases.
      double t = 1.0;
      Vec3 next{};
      Evaluation cand;
      for (int halvings = 0;; ++halvings) {
        for (std::size_t k = 0; k < 3; ++k) next[k] = beta[k] + t * step[k];
        cand = evaluate(next);
        const double slack = 1e-12 * std::max(1.0, std::abs(cur.loglik));
        if (cand.loglik >= cur.loglik - slack || halvings >= 40) break;
        t *= 0.5;
      }
      beta = next;
      cur = cand;

      const double norm = std::sqrt(dot(beta, beta));
      if (norm > opt.divergence_norm) {
        res.warning = "coefficient norm " + std::to_string(norm) + " exceeds " +
                      std::to_string(opt.divergence_norm) + ": complete or quasi-complete separation";
        ++it;
        break;
      }
    }
    res.iterations = it;
    res.beta_hat = beta;
    return res;
  }

 private:
  const DesignMatrix& x_;
  std::span<const double> y_;
  Terms terms_;
  std::vector<double> s_, w_, r_;
};

template <class Terms>
NewtonSolver(const DesignMatrix&, std::span<const double>, Terms) -> NewtonSolver<Terms>;

}  // namespace

DesignMatrix build_design_linear(const TreatmentVector& z, const ExposureVector& g) {
  require_same_length(z.size(), g.size(), "build_design_linear");
  DesignMatrix x;
  x.treated = z.as_doubles();
  x.exposure = g;
  return x;
}

ExposureClasses classify_exposure(const TreatmentVector& z, const ExposureVector& g, double tau) {
  require_same_length(z.size(), g.size(), "classify_exposure");
  if (!(tau >= 0.5 && tau <= 1.0)) throw ContractViolation("classify_exposure: tau must lie in [0.5, 1]");
  ExposureClasses c;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    if (z[i] == 0) {
      (g[i] <= 1.0 - tau + kTieSlack ? c.c0 : c.c0_bar).push_back(id);
    } else {
      (g[i] >= tau - kTieSlack ? c.c1 : c.c1_bar).push_back(id);
    }
  }
  return c;
}

DesignMatrix build_design_tau(const TreatmentVector& z, const ExposureVector& g, double tau) {
  const ExposureClasses c = classify_exposure(z, g, tau);
  DesignMatrix x;
  x.treated = z.as_doubles();
  x.exposure.assign(z.size(), 0.0);
  for (NodeId i : c.c0_bar) x.exposure[i] = g[i] - (1.0 - tau);
  for (NodeId i : c.c1_bar) x.exposure[i] = g[i] - tau;
  return x;
}

EstimationResult ols_fit(const DesignMatrix& x, std::span<const double> y) {
  require_same_length(x.rows(), y.size(), "ols_fit");
  require_same_length(x.treated.size(), x.exposure.size(), "ols_fit");
  if (x.rows() < 3) throw ContractViolation("ols_fit: need at least 3 observations");

  const kernels::Moments m = kernels::weighted_moments(x.treated, x.exposure, {}, y);
  const Vec3 beta = factor_design(m.gram(), "ols_fit").solve(m.rhs());

  std::vector<double> resid(y.size());
  kernels::linear_index(beta, x.treated, x.exposure, resid);
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = y[i] - resid[i];
  const double rss = kernels::centered_sum_squares(resid, 0.0);

  EstimationResult res;
  res.beta_hat = beta;
  res.sigma2_hat = x.rows() > 3 ? rss / static_cast<double>(x.rows() - 3) : 0.0;
  res.ate_hat = beta[1];
  return res;
}

EstimationResult estimate_ate_linear(const DesignMatrix& x, std::span<const double> y) {
  EstimationResult res = ols_fit(x, y);
  res.ate_hat = (*res.beta_hat)[1] + (*res.beta_hat)[2];
  return res;
}

double probit_log_likelihood(const DesignMatrix& x, std::span<const double> y, const Vec3& beta) {
  require_same_length(x.rows(), y.size(), "probit_log_likelihood");
  return NewtonSolver(x, y, probit_terms).log_likelihood(beta);
}

double logit_log_likelihood(const DesignMatrix& x, std::span<const double> y, const Vec3& beta) {
  require_same_length(x.rows(), y.size(), "logit_log_likelihood");
  return NewtonSolver(x, y, logit_terms).log_likelihood(beta);
}

EstimationResult probit_mle(const DesignMatrix& x, std::span<const double> y, const MleOptions& options) {
  require_same_length(x.rows(), y.size(), "probit_mle");
  check_binary(y);
  EstimationResult res = NewtonSolver(x, y, probit_terms).solve(options);
  const Vec3& b = *res.beta_hat;
  res.ate_hat = normal::cdf(b[0] + b[1] + b[2]) - normal::cdf(b[0]);
  return res;
}

EstimationResult logit_mle(const DesignMatrix& x, std::span<const double> y, const MleOptions& options) {
  require_same_length(x.rows(), y.size(), "logit_mle");
  check_binary(y);
  EstimationResult res = NewtonSolver(x, y, logit_terms).solve(options);
  const Vec3& b = *res.beta_hat;
  res.ate_hat = logistic(b[0] + b[1] + b[2]) - logistic(b[0]);
  return res;
}

EstimationResult tau_diff_in_means(std::span<const double> y, const ExposureClasses& classes) {
  if (classes.c1.empty() || classes.c0.empty()) {
    throw EmptyExposureClassError(classes.c1.size(), classes.c0.size());
  }
  for (const auto* cls : {&classes.c0, &classes.c1}) {
    if (cls->back() >= y.size()) throw ContractViolation("tau_diff_in_means: class index outside response");
  }
  EstimationResult res;
  res.ate_hat = mean_over(y, classes.c1) - mean_over(y, classes.c0);
  return res;
}

EstimationResult tau_ols(const TreatmentVector& z, const ExposureVector& g, double tau, std::span<const double> y) {
  EstimationResult res = ols_fit(build_design_tau(z, g, tau), y);
  res.ate_hat = (*res.beta_hat)[1];
  return res;
}

namespace {

ExposureClasses treatment_arms(const TreatmentVector& z) {
  ExposureClasses arms;
  for (std::size_t i = 0; i < z.size(); ++i) (z[i] == 1 ? arms.c1 : arms.c0).push_back(static_cast<NodeId>(i));
  return arms;
}

}  // namespace

EstimationResult sutva_diff_in_means(std::span<const double> y, const TreatmentVector& z) {
  require_same_length(y.size(), z.size(), "sutva_diff_in_means");
  return tau_diff_in_means(y, treatment_arms(z));
}

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Sutva:
      return "sutva";
    case EstimatorKind::TauDiffMeans:
      return "tau-dim";
    case EstimatorKind::LinearOls:
      return "linear";
    case EstimatorKind::TauOls:
      return "tau-ols";
    case EstimatorKind::Probit:
      return "probit";
    case EstimatorKind::Logit:
      return "logit";
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "logistic") return EstimatorKind::Logit;
  if (key == "ols" || key == "linear-ols") return EstimatorKind::LinearOls;
  if (key == "tau" || key == "tau-diff-in-means") return EstimatorKind::TauDiffMeans;
  for (EstimatorKind k : kAllEstimators) {
    if (estimator_name(k) == key) return k;
  }
  return std::nullopt;
}

bool estimator_applies(EstimatorKind estimator, ModelKind data_model) {
  switch (estimator) {
    case EstimatorKind::Sutva:
    case EstimatorKind::TauDiffMeans:
      return true;
    case EstimatorKind::LinearOls:
    case EstimatorKind::TauOls:
      return !is_binary(data_model);
    case EstimatorKind::Probit:
    case EstimatorKind::Logit:
      return is_binary(data_model);
  }
  return false;
}

EstimatorKind matched_estimator(ModelKind data_model) {
  switch (data_model) {
    case ModelKind::Linear:
      return EstimatorKind::LinearOls;
    case ModelKind::Probit:
      return EstimatorKind::Probit;
    case ModelKind::Logistic:
      return EstimatorKind::Logit;
    case ModelKind::TauExposure:
    case ModelKind::TauExposureBinary:
      return EstimatorKind::TauDiffMeans;
  }
  return EstimatorKind::Sutva;
}

EstimationContext::EstimationContext(TreatmentVector z, ExposureVector g, double tau)
    : z_(std::move(z)), g_(std::move(g)), tau_(tau) {
  require_same_length(z_.size(), g_.size(), "EstimationContext");
  x_linear_ = build_design_linear(z_, g_);
  x_tau_ = build_design_tau(z_, g_, tau_);
  classes_ = classify_exposure(z_, g_, tau_);
  arms_ = treatment_arms(z_);
}

EstimationResult EstimationContext::run(EstimatorKind kind, std::span<const double> y,
                                        const MleOptions& options) const {
  require_same_length(y.size(), z_.size(), "EstimationContext::run");
  switch (kind) {
    case EstimatorKind::Sutva:
      return tau_diff_in_means(y, arms_);
    case EstimatorKind::TauDiffMeans:
      return tau_diff_in_means(y, classes_);
    case EstimatorKind::LinearOls:
      return estimate_ate_linear(x_linear_, y);
    case EstimatorKind::TauOls: {
      EstimationResult res = ols_fit(x_tau_, y);
      res.ate_hat = (*res.beta_hat)[1];
      return res;
    }
    case EstimatorKind::Probit:
      return probit_mle(x_linear_, y, options);
    case EstimatorKind::Logit:
      return logit_mle(x_linear_, y, options);
  }
  throw ContractViolation("unknown estimator");
}

}  // namespace netab
