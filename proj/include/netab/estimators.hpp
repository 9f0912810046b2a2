#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netab/graph.hpp"
#include "netab/linalg3.hpp"
#include "netab/response_models.hpp"

namespace netab {

/// N x 3 regression design with rows (1, treated_i, exposure_i). The leading
/// column of ones is implicit; the other two are stored as contiguous columns.
struct DesignMatrix {
  std::vector<double> treated;
  std::vector<double> exposure;

  std::size_t rows() const { return treated.size(); }
  Vec3 row(std::size_t i) const { return {1.0, treated[i], exposure[i]}; }
};

/// Four-way partition of the nodes by own treatment and saturation status.
struct ExposureClasses {
  std::vector<NodeId> c0;      ///< control, treated-neighbor fraction <= 1 - tau
  std::vector<NodeId> c0_bar;  ///< control, fraction > 1 - tau
  std::vector<NodeId> c1;      ///< treated, fraction >= tau
  std::vector<NodeId> c1_bar;  ///< treated, fraction < tau
};

struct EstimationResult {
  double ate_hat = 0.0;
  std::optional<Vec3> beta_hat;
  std::optional<double> sigma2_hat;
  bool converged = true;
  int iterations = 0;
  /// Set when the estimate is reported despite a problem (e.g. separation).
  std::optional<std::string> warning;
};

DesignMatrix build_design_linear(const TreatmentVector& z, const ExposureVector& g);
ExposureClasses classify_exposure(const TreatmentVector& z, const ExposureVector& g, double tau);
/// Design whose third column follows the threshold model's branches: zero for
/// saturated nodes, g - (1 - tau) for unsaturated control nodes and g - tau
/// for unsaturated treated nodes.
DesignMatrix build_design_tau(const TreatmentVector& z, const ExposureVector& g, double tau);

/// Least squares fit; sigma2_hat is RSS / (N - 3).
EstimationResult ols_fit(const DesignMatrix& x, std::span<const double> y);
/// OLS with ate_hat = beta1 + beta2.
EstimationResult estimate_ate_linear(const DesignMatrix& x, std::span<const double> y);

struct MleOptions {
  double gradient_tolerance = 1e-8;
  /// Largest Newton step (infinity norm) accepted at convergence.
  double step_tolerance = 1e-6;
  int max_iterations = 100;
  /// Coefficient norm beyond which the data are treated as separated.
  double divergence_norm = 50.0;
};

/// Probit maximum likelihood (sigma normalized to 1); ate_hat = Phi(b0+b1+b2) - Phi(b0).
EstimationResult probit_mle(const DesignMatrix& x, std::span<const double> y, const MleOptions& options = {});
/// Logistic maximum likelihood; ate_hat = sigmoid(b0+b1+b2) - sigmoid(b0).
EstimationResult logit_mle(const DesignMatrix& x, std::span<const double> y, const MleOptions& options = {});

double probit_log_likelihood(const DesignMatrix& x, std::span<const double> y, const Vec3& beta);
double logit_log_likelihood(const DesignMatrix& x, std::span<const double> y, const Vec3& beta);

/// Mean of y over C1 minus mean over C0.
EstimationResult tau_diff_in_means(std::span<const double> y, const ExposureClasses& classes);
/// OLS on the threshold design; ate_hat = beta1.
EstimationResult tau_ols(const TreatmentVector& z, const ExposureVector& g, double tau, std::span<const double> y);
/// Mean of y over treated nodes minus mean over control nodes.
EstimationResult sutva_diff_in_means(std::span<const double> y, const TreatmentVector& z);

enum class EstimatorKind { Sutva, TauDiffMeans, LinearOls, TauOls, Probit, Logit };

inline constexpr std::array<EstimatorKind, 6> kAllEstimators = {
    EstimatorKind::Sutva,  EstimatorKind::TauDiffMeans, EstimatorKind::LinearOls,
    EstimatorKind::TauOls, EstimatorKind::Probit,       EstimatorKind::Logit};

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(std::string_view name);
/// Whether the estimator is run on responses of the given model: regression
/// estimators need real responses, likelihood estimators binary ones, and the
/// two difference-in-means estimators apply everywhere.
bool estimator_applies(EstimatorKind estimator, ModelKind data_model);
/// The estimator derived from the generating model itself.
EstimatorKind matched_estimator(ModelKind data_model);

/// Treatment, exposure and the designs derived from them, built once and
/// reused for every response vector observed under the same assignment.
class EstimationContext {
 public:
  EstimationContext(TreatmentVector z, ExposureVector g, double tau);

  const TreatmentVector& treatment() const { return z_; }
  const ExposureVector& exposure() const { return g_; }
  double tau() const { return tau_; }
  const DesignMatrix& linear_design() const { return x_linear_; }
  const DesignMatrix& tau_design() const { return x_tau_; }
  const ExposureClasses& classes() const { return classes_; }

  /// Runs `kind` on responses `y`. Throws EstimatorError subclasses on failure.
  EstimationResult run(EstimatorKind kind, std::span<const double> y, const MleOptions& options = {}) const;

 private:
  TreatmentVector z_;
  ExposureVector g_;
  double tau_;
  DesignMatrix x_linear_;
  DesignMatrix x_tau_;
  ExposureClasses classes_;
  ExposureClasses arms_;
};

}  // namespace netab
