#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netab/estimators.hpp"
#include "netab/graph.hpp"
#include "netab/response_models.hpp"
#include "netab/rng.hpp"

namespace netab {

inline constexpr std::uint64_t kDefaultSeed = 20180701;

/// The five coefficient vectors of the misspecification study.
std::vector<Vec3> default_beta_grid();

struct ExperimentConfig {
  /// Edge-list file; when empty an Erdos-Renyi graph is generated instead.
  std::string graph_path;
  std::size_t er_nodes = 2000;
  double er_mean_degree = 12.0;
  std::uint64_t er_seed = 1;

  ModelKind model = ModelKind::Linear;
  std::vector<Vec3> beta_grid = default_beta_grid();
  double sigma = 1.0;
  double tau = 0.85;
  std::size_t replications = 1000;
  double treatment_prob = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::vector<EstimatorKind> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  /// Draw a fresh treatment vector for every replication instead of one per column.
  bool rerandomize = false;
  double alpha = 0.05;
  /// Worker threads; 0 uses the hardware concurrency. Never affects results.
  unsigned threads = 0;

  /// Throws ValidationError on out-of-range settings.
  void validate() const;
  ModelParams params(const Vec3& beta) const { return {beta, sigma, tau}; }
};

/// Loads the configured graph file or generates the Erdos-Renyi substitute.
Graph load_graph(const ExperimentConfig& config);

/// i.i.d. Bernoulli(p) treatment assignment.
TreatmentVector assign_treatment(std::size_t n, double p, Rng& rng);

struct CellReport {
  EstimatorKind estimator = EstimatorKind::Sutva;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_estimate = 0.0;
  std::optional<double> crlb;
  /// Exact MSE of the difference-in-means estimator on threshold-model data.
  std::optional<double> closed_form_mse;
  /// Welch p-value of the squared errors against the best cell of the column.
  std::optional<double> welch_p;
  bool best = false;
  bool significant = false;
  std::optional<std::string> failure;
  /// One entry per replication; NaN where the estimator failed.
  std::vector<double> estimates;
};

struct ColumnReport {
  Vec3 beta{};
  double true_ate = 0.0;
  std::size_t n_treated = 0;
  std::size_t n_c0 = 0, n_c0_bar = 0, n_c1 = 0, n_c1_bar = 0;
  std::vector<CellReport> cells;

  const CellReport* cell(EstimatorKind kind) const;
  const CellReport* best_cell() const;
};

struct StudyReport {
  ModelKind model = ModelKind::Linear;
  double sigma = 1.0;
  double tau = 0.85;
  std::size_t replications = 0;
  double treatment_prob = 0.5;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  bool rerandomize = false;
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::vector<ColumnReport> columns;
};

/// Bitwise comparison (NaN entries compare equal to NaN).
bool identical(const StudyReport& a, const StudyReport& b);

/// Runs the replicated study: per beta one treatment draw, `replications`
/// response draws, every applicable configured estimator on each, then MSE,
/// 95% intervals, bounds and Welch comparisons. Estimator failures are
/// excluded and counted, never fatal. Output does not depend on `threads`.
StudyReport run_study(const ExperimentConfig& config, const Graph& graph);

}  // namespace netab
