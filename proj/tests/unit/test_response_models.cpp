#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "netab/error.hpp"
#include "netab/response_models.hpp"
#include "oracles.hpp"

using namespace netab;

namespace {

ModelParams params(Vec3 beta, double sigma = 1.0, double tau = 0.85) { return ModelParams{beta, sigma, tau}; }

double mean(const std::vector<double>& y) { return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size()); }

}  // namespace

TEST(ModelNames, RoundTrip) {
  for (ModelKind k : kAllModels) EXPECT_EQ(parse_model(model_name(k)), k);
  EXPECT_EQ(parse_model("LOGIT"), ModelKind::Logistic);
  EXPECT_EQ(parse_model("tau_exposure_binary"), ModelKind::TauExposureBinary);
  EXPECT_FALSE(parse_model("cubic").has_value());
}

TEST(ModelParams, Validation) {
  EXPECT_THROW(params({0, 1, 1}, 0.0).validate(), ValidationError);
  EXPECT_THROW(params({0, 1, 1}, 1.0, 0.4).validate(), ValidationError);
  EXPECT_THROW(params({0, 1, 1}, 1.0, 1.01).validate(), ValidationError);
  EXPECT_NO_THROW(params({0, 1, 1}, 1.0, 0.5).validate());
  EXPECT_TRUE(params({0, 1, 1}).realism_warnings().empty());
  EXPECT_FALSE(params({0, 1, -1}).realism_warnings().empty());
}

TEST(MeanResponse, Examples) {
  EXPECT_DOUBLE_EQ(mean_response(ModelKind::Linear, params({0, 1, 0.5}), 1, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(mean_response(ModelKind::TauExposure, params({0, 1, 1}), 1, 0.9), 1.0);
  EXPECT_NEAR(mean_response(ModelKind::TauExposure, params({0, 1, 1}), 1, 0.5), 0.65, 1e-15);
  EXPECT_NEAR(mean_response(ModelKind::TauExposure, params({0, 1, 1}), 0, 0.2), 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(mean_response(ModelKind::TauExposure, params({0, 1, 1}), 0, 0.1), 0.0);
}

TEST(MeanResponse, TauBranchesContinuousAtThresholds) {
  const ModelParams p = params({0.3, 1.2, 2.0}, 1.0, 0.8);
  const double eps = 1e-9;
  for (int z : {0, 1}) {
    const double knot = z == 0 ? 1.0 - p.tau : p.tau;
    const double below = mean_response(ModelKind::TauExposure, p, z, knot - eps);
    const double above = mean_response(ModelKind::TauExposure, p, z, knot + eps);
    EXPECT_NEAR(below, above, 1e-8) << "z=" << z;
  }
}

TEST(SuccessProbability, MatchesLinks) {
  const ModelParams p = params({0, 1, 1}, 2.0);
  EXPECT_NEAR(success_probability(ModelKind::Probit, p, 1, 1.0), oracle::Phi(1.0), 1e-15);
  EXPECT_NEAR(success_probability(ModelKind::Logistic, params({0, 1, 1}), 1, 1.0), oracle::sigmoid(2.0), 1e-15);
  EXPECT_NEAR(success_probability(ModelKind::TauExposureBinary, p, 1, 1.0), oracle::Phi(0.5), 1e-15);
}

TEST(Generate, NoiselessLinearLimit) {
  const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}, {2, 3}};
  const Graph g = Graph::from_edges(4, edges);
  Rng rng(1);
  const ResponseVector y =
      generate(ModelKind::Linear, params({0, 1, 1}, 1e-12), g, TreatmentVector(std::vector<std::uint8_t>(4, 1)), rng);
  for (double v : y.y) EXPECT_NEAR(v, 2.0, 1e-9);
}

TEST(Generate, LogisticNullModelIsFairCoin) {
  const std::size_t n = 100000;
  Rng rng(2);
  const TreatmentVector z(std::vector<std::uint8_t>(n, 0));
  const ResponseVector y = generate(ModelKind::Logistic, params({0, 0, 0}), z, ExposureVector(n, 0.0), rng);
  EXPECT_NEAR(mean(y.y), 0.5, 0.01);
}

TEST(Generate, ProbitAllTreated) {
  const std::size_t n = 100000;
  Rng rng(3);
  const TreatmentVector z(std::vector<std::uint8_t>(n, 1));
  const ResponseVector y = generate(ModelKind::Probit, params({0, 1, 1}), z, ExposureVector(n, 1.0), rng);
  EXPECT_NEAR(mean(y.y), 0.9772, 0.005);
}

TEST(Generate, DeterministicGivenSeed) {
  const Graph g = erdos_renyi(200, 5.0, 4);
  std::vector<std::uint8_t> zs(200);
  for (std::size_t i = 0; i < zs.size(); ++i) zs[i] = static_cast<std::uint8_t>(i % 3 == 0);
  const TreatmentVector z(zs);
  for (ModelKind k : kAllModels) {
    Rng a(9), b(9);
    EXPECT_EQ(generate(k, params({0, 1, 1}), g, z, a).y, generate(k, params({0, 1, 1}), g, z, b).y);
  }
}

TEST(Generate, InvalidParamsRejected) {
  Rng rng(1);
  const TreatmentVector z({1, 0});
  EXPECT_THROW(generate(ModelKind::Linear, params({0, 1, 1}, -1.0), z, ExposureVector{0.0, 1.0}, rng), ValidationError);
  EXPECT_THROW(generate(ModelKind::Linear, params({0, 1, 1}), z, ExposureVector{0.0}, rng), ContractViolation);
}

TEST(TrueAte, ClosedForms) {
  EXPECT_NEAR(true_ate(ModelKind::Logistic, params({0, 1, 1})), 0.3808, 5e-5);
  EXPECT_NEAR(true_ate(ModelKind::Probit, params({0, 1, 1})), 0.4772, 5e-5);
  EXPECT_DOUBLE_EQ(true_ate(ModelKind::TauExposure, params({0, 0, 1})), 0.0);
  EXPECT_NEAR(true_ate(ModelKind::TauExposureBinary, params({0, 1, 2})), 0.3413, 5e-5);
  EXPECT_DOUBLE_EQ(true_ate(ModelKind::Linear, params({0, 1, 0.5})), 1.5);
  // Logistic ATE written through exponentials: (e^{-b0} - e^{-(b0+b1+b2)}) / ((1+e^{-b0})(1+e^{-(b0+b1+b2)})).
  const double b0 = 0.2, s = 1.7;
  const double via_exp = (std::exp(-b0) - std::exp(-s)) / ((1 + std::exp(-b0)) * (1 + std::exp(-s)));
  EXPECT_NEAR(true_ate(ModelKind::Logistic, params({b0, 1.0, 0.5})), via_exp, 1e-15);
}

// Mean over nodes of Y(Z=1) - Y(Z=0) approaches the closed form.
TEST(TrueAte, MonteCarloConsistency) {
  const Graph g = erdos_renyi(4000, 10.0, 7);
  const std::size_t n = g.n_nodes();
  const TreatmentVector ones(std::vector<std::uint8_t>(n, 1));
  const TreatmentVector zeros(std::vector<std::uint8_t>(n, 0));
  for (ModelKind k : kAllModels) {
    const ModelParams p = params({0.1, 1.0, 0.5}, 1.3);
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng r1(2 * seed), r0(2 * seed + 1);
      const auto y1 = generate(k, p, g, ones, r1).y;
      const auto y0 = generate(k, p, g, zeros, r0).y;
      for (NodeId i = 0; i < n; ++i) {
        if (g.degree(i) == 0) continue;
        const double d = y1[i] - y0[i];
        sum += d;
        sum_sq += d * d;
        ++count;
      }
    }
    const double m = sum / static_cast<double>(count);
    const double se = std::sqrt((sum_sq / static_cast<double>(count) - m * m) / static_cast<double>(count));
    EXPECT_NEAR(m, true_ate(k, p), 4.0 * se) << model_name(k);
  }
}
