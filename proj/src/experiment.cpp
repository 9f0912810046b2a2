#include "netab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "netab/bounds.hpp"
#include "netab/error.hpp"
#include "netab/stats.hpp"

namespace netab {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kTreatmentStream = 0x7EA7'0000'0000ULL;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t model_index(ModelKind m) { return static_cast<std::uint64_t>(m); }

struct Outcome {
  double estimate = kNaN;
  std::string failure;
};

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs)));
}

template <class Fn>
void parallel_for(std::size_t jobs, unsigned threads, Fn&& fn) {
  const unsigned n = worker_count(threads, jobs);
  if (n <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) fn(j);
    });
  }
}

void attach_bounds(const ExperimentConfig& cfg, const EstimationContext& ctx, const ModelParams& params,
                   ColumnReport& col) {
  const double sigma2 = cfg.sigma * cfg.sigma;
  for (CellReport& cell : col.cells) {
    try {
      switch (cell.estimator) {
        case EstimatorKind::LinearOls:
          if (cfg.model == ModelKind::Linear) cell.crlb = crlb_linear(ctx.linear_design(), sigma2).crlb;
          break;
        case EstimatorKind::Probit:
          if (cfg.model == ModelKind::Probit) {
            const Vec3 b{params.beta[0] / cfg.sigma, params.beta[1] / cfg.sigma, params.beta[2] / cfg.sigma};
            cell.crlb = crlb_probit(ctx.linear_design(), b).crlb;
          }
          break;
        case EstimatorKind::Logit:
          if (cfg.model == ModelKind::Logistic) cell.crlb = crlb_logit(ctx.linear_design(), params.beta).crlb;
          break;
        case EstimatorKind::TauOls:
          if (cfg.model == ModelKind::TauExposure) cell.crlb = crlb_tau(ctx.tau_design(), sigma2).beta1.crlb;
          break;
        case EstimatorKind::TauDiffMeans:
          if (cfg.model == ModelKind::TauExposure) {
            cell.closed_form_mse = mse_tau_closed(sigma2, col.n_c1, col.n_c0);
            cell.crlb = crlb_tau(ctx.tau_design(), sigma2).beta1.crlb;
          } else if (cfg.model == ModelKind::TauExposureBinary) {
            cell.closed_form_mse = mse_taubin_closed(params, col.n_c1, col.n_c0);
          }
          break;
        case EstimatorKind::Sutva:
          break;
      }
    } catch (const EstimatorError&) {
      // Bound undefined on this design; leave it empty.
    }
  }
}

void summarize_cell(CellReport& cell, double truth) {
  std::vector<double> sq;
  sq.reserve(cell.estimates.size());
  double sum = 0.0;
  for (double e : cell.estimates) {
    if (std::isnan(e)) continue;
    sq.push_back((e - truth) * (e - truth));
    sum += e;
  }
  cell.n_ok = sq.size();
  cell.n_failed = cell.estimates.size() - sq.size();
  if (sq.empty()) {
    cell.mse = cell.ci_low = cell.ci_high = cell.mean_estimate = kNaN;
    return;
  }
  const SampleSummary s = summarize(sq);
  cell.mse = s.mean;
  cell.mean_estimate = sum / static_cast<double>(sq.size());
  const double half = sq.size() >= 2 ? kZ95 * std::sqrt(s.variance / static_cast<double>(s.n)) : 0.0;
  cell.ci_low = std::max(0.0, s.mean - half);
  cell.ci_high = s.mean + half;
}

std::vector<double> squared_errors(const CellReport& cell, double truth) {
  std::vector<double> sq;
  for (double e : cell.estimates) {
    if (!std::isnan(e)) sq.push_back((e - truth) * (e - truth));
  }
  return sq;
}

void rank_cells(ColumnReport& col, double alpha) {
  CellReport* best = nullptr;
  for (CellReport& c : col.cells) {
    if (c.n_ok == 0) continue;
    if (best == nullptr || c.mse < best->mse) best = &c;
  }
  if (best == nullptr) return;
  best->best = true;
  const std::vector<double> best_sq = squared_errors(*best, col.true_ate);
  for (CellReport& c : col.cells) {
    if (&c == best || c.n_ok < 2 || best_sq.size() < 2) continue;
    const std::vector<double> sq = squared_errors(c, col.true_ate);
    c.welch_p = welch_test(sq, best_sq).p_value;
    c.significant = *c.welch_p < alpha;
  }
}

bool same_double(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_opt(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || same_double(*a, *b));
}

}  // namespace

std::vector<Vec3> default_beta_grid() {
  return {{0.0, 0.0, 1.0}, {0.0, 1.0, 0.5}, {0.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}};
}

void ExperimentConfig::validate() const {
  if (replications < 2) throw ValidationError("replications must be at least 2");
  if (!(treatment_prob > 0.0 && treatment_prob < 1.0)) throw ValidationError("treatment probability must lie in (0, 1)");
  if (beta_grid.empty()) throw ValidationError("beta grid is empty");
  if (estimators.empty()) throw ValidationError("no estimators configured");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("significance level must lie in (0, 1)");
  for (const Vec3& b : beta_grid) params(b).validate();
  if (graph_path.empty() && er_nodes < 2) throw ValidationError("generated graph needs at least two nodes");
}

Graph load_graph(const ExperimentConfig& config) {
  if (!config.graph_path.empty()) return load_edge_list(config.graph_path);
  return erdos_renyi(config.er_nodes, config.er_mean_degree, config.er_seed);
}

TreatmentVector assign_treatment(std::size_t n, double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw ContractViolation("assign_treatment: p must lie in (0, 1)");
  std::bernoulli_distribution coin(p);
  std::vector<std::uint8_t> z(n);
  for (auto& v : z) v = coin(rng) ? 1 : 0;
  return TreatmentVector(std::move(z));
}

const CellReport* ColumnReport::cell(EstimatorKind kind) const {
  for (const CellReport& c : cells) {
    if (c.estimator == kind) return &c;
  }
  return nullptr;
}

const CellReport* ColumnReport::best_cell() const {
  for (const CellReport& c : cells) {
    if (c.best) return &c;
  }
  return nullptr;
}

StudyReport run_study(const ExperimentConfig& config, const Graph& graph) {
  config.validate();

  StudyReport report;
  report.model = config.model;
  report.sigma = config.sigma;
  report.tau = config.tau;
  report.replications = config.replications;
  report.treatment_prob = config.treatment_prob;
  report.seed = config.seed;
  report.alpha = config.alpha;
  report.rerandomize = config.rerandomize;
  report.n_nodes = graph.n_nodes();
  report.n_edges = graph.n_edges();

  std::vector<EstimatorKind> active;
  for (EstimatorKind e : config.estimators) {
    if (estimator_applies(e, config.model) && std::find(active.begin(), active.end(), e) == active.end()) {
      active.push_back(e);
    }
  }

  const std::size_t n_cols = config.beta_grid.size();
  const std::size_t reps = config.replications;
  const std::uint64_t model_key = model_index(config.model);

  std::vector<std::optional<EstimationContext>> contexts(n_cols);
  for (std::size_t b = 0; b < n_cols; ++b) {
    Rng rng = derive_stream(config.seed, {model_key, b, kTreatmentStream});
    TreatmentVector z = assign_treatment(graph.n_nodes(), config.treatment_prob, rng);
    ExposureVector g = treated_fraction(graph, z);
    contexts[b].emplace(std::move(z), std::move(g), config.tau);
  }

  // outcomes[(b * reps + r) * n_est + e]
  std::vector<Outcome> outcomes(n_cols * reps * active.size());
  parallel_for(n_cols * reps, config.threads, [&](std::size_t job) {
    const std::size_t b = job / reps;
    const std::size_t r = job % reps;
    const ModelParams params = config.params(config.beta_grid[b]);

    std::optional<EstimationContext> fresh;
    if (config.rerandomize) {
      Rng zr = derive_stream(config.seed, {model_key, b, r, kTreatmentStream});
      TreatmentVector z = assign_treatment(graph.n_nodes(), config.treatment_prob, zr);
      ExposureVector g = treated_fraction(graph, z);
      fresh.emplace(std::move(z), std::move(g), config.tau);
    }
    const EstimationContext& ctx = fresh ? *fresh : *contexts[b];

    Rng rng = derive_stream(config.seed, {model_key, b, r});
    const ResponseVector y = generate(config.model, params, ctx.treatment(), ctx.exposure(), rng);
    for (std::size_t e = 0; e < active.size(); ++e) {
      Outcome& out = outcomes[job * active.size() + e];
      try {
        const EstimationResult res = ctx.run(active[e], y.y);
        if (res.converged) {
          out.estimate = res.ate_hat;
        } else {
          out.failure = res.warning.value_or("did not converge");
        }
      } catch (const EstimatorError& err) {
        out.failure = err.what();
      }
    }
  });

  for (std::size_t b = 0; b < n_cols; ++b) {
    ColumnReport col;
    col.beta = config.beta_grid[b];
    const ModelParams params = config.params(col.beta);
    col.true_ate = true_ate(config.model, params);
    const EstimationContext& ctx = *contexts[b];
    col.n_treated = ctx.treatment().n_treated();
    col.n_c0 = ctx.classes().c0.size();
    col.n_c0_bar = ctx.classes().c0_bar.size();
    col.n_c1 = ctx.classes().c1.size();
    col.n_c1_bar = ctx.classes().c1_bar.size();

    for (std::size_t e = 0; e < active.size(); ++e) {
      CellReport cell;
      cell.estimator = active[e];
      cell.estimates.resize(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        const Outcome& out = outcomes[(b * reps + r) * active.size() + e];
        cell.estimates[r] = out.estimate;
        if (!out.failure.empty() && !cell.failure) cell.failure = out.failure;
      }
      summarize_cell(cell, col.true_ate);
      col.cells.push_back(std::move(cell));
    }
    if (!config.rerandomize) attach_bounds(config, ctx, params, col);
    rank_cells(col, config.alpha);
    report.columns.push_back(std::move(col));
  }
  return report;
}

bool identical(const StudyReport& a, const StudyReport& b) {
  if (a.model != b.model || !same_double(a.sigma, b.sigma) || !same_double(a.tau, b.tau) ||
      a.replications != b.replications || !same_double(a.treatment_prob, b.treatment_prob) || a.seed != b.seed ||
      !same_double(a.alpha, b.alpha) || a.rerandomize != b.rerandomize || a.n_nodes != b.n_nodes ||
      a.n_edges != b.n_edges || a.columns.size() != b.columns.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.columns.size(); ++i) {
    const ColumnReport& ca = a.columns[i];
    const ColumnReport& cb = b.columns[i];
    for (std::size_t k = 0; k < 3; ++k) {
      if (!same_double(ca.beta[k], cb.beta[k])) return false;
    }
    if (!same_double(ca.true_ate, cb.true_ate) || ca.n_treated != cb.n_treated || ca.n_c0 != cb.n_c0 ||
        ca.n_c0_bar != cb.n_c0_bar || ca.n_c1 != cb.n_c1 || ca.n_c1_bar != cb.n_c1_bar ||
        ca.cells.size() != cb.cells.size()) {
      return false;
    }
    for (std::size_t j = 0; j < ca.cells.size(); ++j) {
      const CellReport& x = ca.cells[j];
      const CellReport& y = cb.cells[j];
      if (x.estimator != y.estimator || x.n_ok != y.n_ok || x.n_failed != y.n_failed || !same_double(x.mse, y.mse) ||
          !same_double(x.ci_low, y.ci_low) || !same_double(x.ci_high, y.ci_high) ||
          !same_double(x.mean_estimate, y.mean_estimate) || !same_opt(x.crlb, y.crlb) ||
          !same_opt(x.closed_form_mse, y.closed_form_mse) || !same_opt(x.welch_p, y.welch_p) || x.best != y.best ||
          x.significant != y.significant || x.failure != y.failure || x.estimates.size() != y.estimates.size()) {
        return false;
      }
      for (std::size_t r = 0; r < x.estimates.size(); ++r) {
        if (!same_double(x.estimates[r], y.estimates[r])) return false;
      }
    }
  }
  return true;
}

}  // namespace netab
