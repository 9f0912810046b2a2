#include "netab/response_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "netab/error.hpp"
#include "netab/normal.hpp"

namespace netab {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear:
      return "linear";
    case ModelKind::Probit:
      return "probit";
    case ModelKind::Logistic:
      return "logistic";
    case ModelKind::TauExposure:
      return "tau-exposure";
    case ModelKind::TauExposureBinary:
      return "tau-exposure-binary";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "logit") return ModelKind::Logistic;
  if (key == "tau") return ModelKind::TauExposure;
  if (key == "tau-binary" || key == "tau-bin") return ModelKind::TauExposureBinary;
  for (ModelKind k : kAllModels) {
    if (model_name(k) == key) return k;
  }
  return std::nullopt;
}

bool is_binary(ModelKind kind) {
  return kind == ModelKind::Probit || kind == ModelKind::Logistic || kind == ModelKind::TauExposureBinary;
}

void ModelParams::validate() const {
  for (double b : beta) {
    if (!std::isfinite(b)) throw ValidationError("beta coefficients must be finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("sigma must be positive, got " + std::to_string(sigma));
  }
  if (!(tau >= 0.5 && tau <= 1.0)) throw ValidationError("tau must lie in [0.5, 1], got " + std::to_string(tau));
}

std::vector<std::string> ModelParams::realism_warnings() const {
  std::vector<std::string> w;
  if (!(beta[1] * beta[2] > 0.0)) w.emplace_back("beta1 * beta2 <= 0: own and neighbor effects differ in sign");
  if (std::abs(beta[2] * tau) > std::abs(beta[1])) {
    w.emplace_back("|beta2 * tau| > |beta1|: treated and control mean curves cross");
  }
  return w;
}

namespace {

double tau_mean(const ModelParams& p, int z_i, double g_i) {
  const auto& b = p.beta;
  if (z_i == 0) {
    return g_i <= 1.0 - p.tau ? b[0] : b[0] + b[2] * (g_i - (1.0 - p.tau));
  }
  return g_i >= p.tau ? b[0] + b[1] : b[0] + b[1] + b[2] * (g_i - p.tau);
}

double logistic(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

}  // namespace

double mean_response(ModelKind kind, const ModelParams& params, int z_i, double g_i) {
  switch (kind) {
    case ModelKind::Linear:
    case ModelKind::Probit:
    case ModelKind::Logistic:
      return params.beta[0] + params.beta[1] * z_i + params.beta[2] * g_i;
    case ModelKind::TauExposure:
    case ModelKind::TauExposureBinary:
      return tau_mean(params, z_i, g_i);
  }
  return 0.0;
}

double success_probability(ModelKind kind, const ModelParams& params, int z_i, double g_i) {
  const double s = mean_response(kind, params, z_i, g_i);
  switch (kind) {
    case ModelKind::Probit:
    case ModelKind::TauExposureBinary:
      return normal::cdf(s, params.sigma);
    case ModelKind::Logistic:
      return logistic(s);
    default:
      throw ContractViolation("success_probability: model '" + std::string(model_name(kind)) + "' is not binary");
  }
}

ResponseVector generate(ModelKind kind, const ModelParams& params, const Graph& graph, const TreatmentVector& z,
                        Rng& rng) {
  return generate(kind, params, z, treated_fraction(graph, z), rng);
}

ResponseVector generate(ModelKind kind, const ModelParams& params, const TreatmentVector& z,
                        const ExposureVector& g, Rng& rng) {
  params.validate();
  if (z.size() != g.size()) throw ContractViolation("generate: treatment and exposure lengths differ");

  ResponseVector out;
  out.kind = kind;
  out.y.resize(z.size());
  std::normal_distribution<double> noise(0.0, params.sigma);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (std::size_t i = 0; i < z.size(); ++i) {
    const double mean = mean_response(kind, params, z[i], g[i]);
    switch (kind) {
      case ModelKind::Linear:
      case ModelKind::TauExposure:
        out.y[i] = mean + noise(rng);
        break;
      case ModelKind::Probit:
      case ModelKind::TauExposureBinary:
        // Latent threshold: P(mean + eps > 0) = Phi(mean / sigma).
        out.y[i] = mean + noise(rng) > 0.0 ? 1.0 : 0.0;
        break;
      case ModelKind::Logistic:
        out.y[i] = unif(rng) < logistic(mean) ? 1.0 : 0.0;
        break;
    }
  }
  return out;
}

double true_ate(ModelKind kind, const ModelParams& params) {
  params.validate();
  const auto& b = params.beta;
  const double all = b[0] + b[1] + b[2];
  switch (kind) {
    case ModelKind::Linear:
      return b[1] + b[2];
    case ModelKind::Probit:
      return normal::cdf(all, params.sigma) - normal::cdf(b[0], params.sigma);
    case ModelKind::Logistic: {
      const double e0 = std::exp(-b[0]);
      const double e1 = std::exp(-all);
      return (e0 - e1) / ((1.0 + e0) * (1.0 + e1));
    }
    case ModelKind::TauExposure:
      return b[1];
    case ModelKind::TauExposureBinary:
      return normal::cdf(b[0] + b[1], params.sigma) - normal::cdf(b[0], params.sigma);
  }
  return 0.0;
}

}  // namespace netab
