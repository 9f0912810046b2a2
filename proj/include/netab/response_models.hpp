#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netab/graph.hpp"
#include "netab/linalg3.hpp"
#include "netab/rng.hpp"

namespace netab {

enum class ModelKind { Linear, Probit, Logistic, TauExposure, TauExposureBinary };

inline constexpr std::array<ModelKind, 5> kAllModels = {ModelKind::Linear, ModelKind::Probit, ModelKind::Logistic,
                                                        ModelKind::TauExposure, ModelKind::TauExposureBinary};

std::string_view model_name(ModelKind kind);
/// Accepts the names produced by model_name (case-insensitive, '-' or '_').
std::optional<ModelKind> parse_model(std::string_view name);
/// True for the models whose responses are 0/1.
bool is_binary(ModelKind kind);

struct ModelParams {
  Vec3 beta{0.0, 1.0, 1.0};
  double sigma = 1.0;
  double tau = 0.85;

  /// Throws ValidationError unless sigma > 0 and tau in [0.5, 1].
  void validate() const;
  /// Conditions under which the threshold model is considered realistic
  /// (same-sign effects, non-crossing mean curves). Advisory only.
  std::vector<std::string> realism_warnings() const;
};

struct ResponseVector {
  std::vector<double> y;
  ModelKind kind = ModelKind::Linear;
};

/// Noiseless mean of the response (linear and threshold models) or the
/// latent linear index x_i^T beta (probit, logistic). TauExposureBinary
/// returns the mean of its underlying real-valued response.
double mean_response(ModelKind kind, const ModelParams& params, int z_i, double g_i);

/// Probability that a binary model emits 1 at (z_i, g_i).
double success_probability(ModelKind kind, const ModelParams& params, int z_i, double g_i);

ResponseVector generate(ModelKind kind, const ModelParams& params, const Graph& graph, const TreatmentVector& z,
                        Rng& rng);
/// Same as generate() with the exposure vector already computed.
ResponseVector generate(ModelKind kind, const ModelParams& params, const TreatmentVector& z,
                        const ExposureVector& g, Rng& rng);

/// Closed-form average treatment effect: mean response with everyone treated
/// minus mean response with nobody treated.
double true_ate(ModelKind kind, const ModelParams& params);

}  // namespace netab
