#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "netab/bounds.hpp"
#include "netab/cli.hpp"
#include "netab/config.hpp"
#include "netab/error.hpp"
#include "netab/estimators.hpp"
#include "netab/experiment.hpp"
#include "netab/report.hpp"

namespace netab::cli {

namespace {

using nlohmann::json;

struct GraphFlags {
  std::string path;
  std::size_t er_nodes = 0;
  double er_degree = 12.0;
  std::uint64_t er_seed = 1;

  void add(CLI::App* app) {
    app->add_option("--graph", path, "Edge-list file");
    app->add_option("--er-nodes", er_nodes, "Generate an Erdos-Renyi graph with this many nodes");
    app->add_option("--er-degree", er_degree, "Mean degree of the generated graph");
    app->add_option("--er-seed", er_seed, "Seed of the generated graph");
  }

  Graph load() const {
    if (!path.empty()) return load_edge_list(path);
    if (er_nodes == 0) throw ValidationError("either --graph or --er-nodes is required");
    return erdos_renyi(er_nodes, er_degree, er_seed);
  }
};

struct ModelFlags {
  std::string model = "linear";
  std::string beta = "0,1,1";
  double sigma = 1.0;
  double tau = 0.85;

  void add(CLI::App* app) {
    app->add_option("--model", model, "linear | probit | logistic | tau-exposure | tau-exposure-binary");
    app->add_option("--beta", beta, "Coefficients b0,b1,b2");
    app->add_option("--sigma", sigma, "Noise standard deviation");
    app->add_option("--tau", tau, "Saturation threshold");
  }

  ModelKind kind() const {
    auto m = parse_model(model);
    if (!m) throw ValidationError("unknown model '" + model + "'");
    return *m;
  }

  ModelParams params() const {
    ModelParams p{parse_beta(beta), sigma, tau};
    p.validate();
    return p;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NETAB_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("NETAB_SEED='") + env + "' is not an unsigned integer");
  }
  return fallback;
}

// Response files: header "node_id,z,g,y", one node per row.
struct ResponseTable {
  std::vector<std::int64_t> node_id;
  std::vector<std::uint8_t> z;
  std::vector<double> g;
  std::vector<double> y;
};

ResponseTable read_responses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open response file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty response file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node_id,z,g,y") throw ParseError(path + ": expected header 'node_id,z,g,y'", 1);
  ResponseTable t;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f[4];
    for (auto& s : f) {
      if (!std::getline(ss, s, ',')) throw ParseError(path + ": expected 4 fields", line_no);
    }
    try {
      std::size_t used = 0;
      t.node_id.push_back(std::stoll(f[0], &used));
      const int zi = std::stoi(f[1]);
      if (zi != 0 && zi != 1) throw ParseError(path + ": z must be 0 or 1", line_no);
      t.z.push_back(static_cast<std::uint8_t>(zi));
      t.g.push_back(std::stod(f[2]));
      t.y.push_back(std::stod(f[3]));
    } catch (const std::logic_error&) {
      throw ParseError(path + ": malformed number", line_no);
    }
  }
  if (t.y.empty()) throw ParseError(path + ": no rows", 0);
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

json result_json(const EstimationResult& r) {
  json j;
  j["ate_hat"] = r.ate_hat;
  j["beta_hat"] = r.beta_hat ? json{(*r.beta_hat)[0], (*r.beta_hat)[1], (*r.beta_hat)[2]} : json(nullptr);
  j["sigma2_hat"] = r.sigma2_hat ? json(*r.sigma2_hat) : json(nullptr);
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["warning"] = r.warning ? json(*r.warning) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  GraphFlags graph;
  ModelFlags model;
  double p = 0.5;
  std::string treatment;
  std::optional<std::uint64_t> seed;
  std::string out_path;

  int run(std::ostream& out) const {
    const ModelKind kind = model.kind();
    const ModelParams params = model.params();
    const Graph g = graph.load();
    const std::uint64_t s = resolve_seed(seed, kDefaultSeed);

    TreatmentVector z;
    if (!treatment.empty()) {
      std::vector<std::uint8_t> zs;
      std::stringstream ss(treatment);
      for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok != "0" && tok != "1") throw ValidationError("--treatment entries must be 0 or 1");
        zs.push_back(tok == "1" ? 1 : 0);
      }
      if (zs.size() != g.n_nodes()) {
        throw ValidationError("--treatment has " + std::to_string(zs.size()) + " entries for " +
                              std::to_string(g.n_nodes()) + " nodes");
      }
      z = TreatmentVector(std::move(zs));
    } else {
      Rng zr = derive_stream(s, {0});
      z = assign_treatment(g.n_nodes(), p, zr);
    }
    const ExposureVector gv = treated_fraction(g, z);
    Rng yr = derive_stream(s, {1});
    const ResponseVector y = generate(kind, params, z, gv, yr);

    std::ostringstream csv;
    csv << "node_id,z,g,y\n";
    for (std::size_t i = 0; i < y.y.size(); ++i) {
      const std::int64_t id = g.labels().empty() ? static_cast<std::int64_t>(i) : g.labels()[i];
      csv << id << ',' << int(z[i]) << ',' << format_double(gv[i]) << ',' << format_double(y.y[i]) << '\n';
    }
    if (out_path.empty()) {
      out << csv.str();
    } else {
      write_text(out_path, csv.str());
    }
    std::ostream& info = out_path.empty() ? std::cerr : out;
    info << "true_ate " << format_double(true_ate(kind, params)) << '\n';
    for (const std::string& w : params.realism_warnings()) {
      if (kind == ModelKind::TauExposure || kind == ModelKind::TauExposureBinary) std::cerr << "warning: " << w << '\n';
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- estimate

struct EstimateCmd {
  std::string input;
  std::string estimator = "sutva";
  double tau = 0.85;
  bool as_json = false;

  int run(std::ostream& out) const {
    auto kind = parse_estimator(estimator);
    if (!kind) throw ValidationError("unknown estimator '" + estimator + "'");
    if (!(tau >= 0.5 && tau <= 1.0)) throw ValidationError("tau must lie in [0.5, 1]");
    ResponseTable t = read_responses(input);
    const EstimationContext ctx(TreatmentVector(std::move(t.z)), std::move(t.g), tau);
    const EstimationResult r = ctx.run(*kind, t.y);
    if (as_json) {
      json j = result_json(r);
      j["estimator"] = std::string(estimator_name(*kind));
      out << j.dump(1) << '\n';
    } else {
      out << "estimator " << estimator_name(*kind) << '\n' << "ate_hat " << format_double(r.ate_hat) << '\n';
      if (r.beta_hat) {
        out << "beta_hat " << format_double((*r.beta_hat)[0]) << ' ' << format_double((*r.beta_hat)[1]) << ' '
            << format_double((*r.beta_hat)[2]) << '\n';
      }
      if (r.sigma2_hat) out << "sigma2_hat " << format_double(*r.sigma2_hat) << '\n';
      out << "converged " << (r.converged ? "true" : "false") << '\n' << "iterations " << r.iterations << '\n';
      if (r.warning) out << "warning " << *r.warning << '\n';
    }
    return r.converged ? kOk : kEstimatorFailure;
  }
};

// ---------------------------------------------------------------- bounds

struct BoundsCmd {
  std::string input;
  GraphFlags graph;
  ModelFlags model;
  double p = 0.5;
  std::optional<std::uint64_t> seed;
  bool as_json = false;

  int run(std::ostream& out) const {
    const ModelKind kind = model.kind();
    const ModelParams params = model.params();
    TreatmentVector z;
    ExposureVector g;
    if (!input.empty()) {
      ResponseTable t = read_responses(input);
      z = TreatmentVector(std::move(t.z));
      g = std::move(t.g);
    } else {
      const Graph gr = graph.load();
      Rng zr = derive_stream(resolve_seed(seed, kDefaultSeed), {0});
      z = assign_treatment(gr.n_nodes(), p, zr);
      g = treated_fraction(gr, z);
    }
    const EstimationContext ctx(z, g, params.tau);
    const double sigma2 = params.sigma * params.sigma;

    json j;
    j["model"] = std::string(model_name(kind));
    j["true_ate"] = true_ate(kind, params);
    auto put = [&j](const std::string& key, const BoundResult& b) {
      j[key] = {{"crlb", b.crlb}, {"gradient", {b.gradient[0], b.gradient[1], b.gradient[2]}}, {"asymptotic", b.asymptotic}};
    };
    switch (kind) {
      case ModelKind::Linear:
        put("crlb", crlb_linear(ctx.linear_design(), sigma2));
        break;
      case ModelKind::Probit: {
        const Vec3 b{params.beta[0] / params.sigma, params.beta[1] / params.sigma, params.beta[2] / params.sigma};
        put("crlb", crlb_probit(ctx.linear_design(), b));
        break;
      }
      case ModelKind::Logistic:
        put("crlb", crlb_logit(ctx.linear_design(), params.beta));
        break;
      case ModelKind::TauExposure: {
        const TauBoundResult tb = crlb_tau(ctx.tau_design(), sigma2);
        put("crlb", tb.beta1);
        put("crlb_beta1_plus_beta2", tb.beta1_plus_beta2);
        j["mse_diff_in_means"] = mse_tau_closed(sigma2, ctx.classes().c1.size(), ctx.classes().c0.size());
        break;
      }
      case ModelKind::TauExposureBinary:
        j["mse_diff_in_means"] = mse_taubin_closed(params, ctx.classes().c1.size(), ctx.classes().c0.size());
        break;
    }
    const auto& c = ctx.classes();
    j["class_sizes"] = {{"c0", c.c0.size()}, {"c0_bar", c.c0_bar.size()}, {"c1", c.c1.size()}, {"c1_bar", c.c1_bar.size()}};

    if (as_json) {
      out << j.dump(1) << '\n';
    } else {
      out << "model " << model_name(kind) << '\n' << "true_ate " << format_double(j["true_ate"].get<double>()) << '\n';
      for (const char* key : {"crlb", "crlb_beta1_plus_beta2"}) {
        if (j.contains(key)) out << key << ' ' << format_double(j[key]["crlb"].get<double>()) << '\n';
      }
      if (j.contains("mse_diff_in_means")) {
        out << "mse_diff_in_means " << format_double(j["mse_diff_in_means"].get<double>()) << '\n';
      }
      out << "classes c0=" << c.c0.size() << " c0_bar=" << c.c0_bar.size() << " c1=" << c.c1.size()
          << " c1_bar=" << c.c1_bar.size() << '\n';
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- study

struct StudyCmd {
  std::string config_path;
  std::optional<std::string> graph;
  std::optional<std::size_t> er_nodes;
  std::optional<double> er_degree;
  std::optional<std::string> model;
  std::vector<std::string> betas;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> alpha;
  std::optional<std::string> estimators;
  bool rerandomize = false;
  std::string out_dir = ".";
  std::string format = "all";

  ExperimentConfig config() const {
    ExperimentConfig c;
    bool seed_in_file = false;
    if (!config_path.empty()) {
      c = load_config(config_path);
      std::ifstream in(config_path);
      for (std::string line; std::getline(in, line);) {
        std::istringstream ss(line.substr(0, line.find('#')));
        std::string key;
        std::getline(ss >> std::ws, key, '=');
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key == "seed") seed_in_file = true;
      }
    }
    if (graph) apply_setting(c, "graph", *graph);
    if (er_nodes) c.er_nodes = *er_nodes;
    if (er_degree) c.er_mean_degree = *er_degree;
    if (model) apply_setting(c, "model", *model);
    if (!betas.empty()) {
      std::string joined;
      for (const auto& b : betas) joined += b + ";";
      apply_setting(c, "beta", joined);
    }
    if (sigma) c.sigma = *sigma;
    if (tau) c.tau = *tau;
    if (reps) c.replications = *reps;
    if (threads) c.threads = *threads;
    if (alpha) c.alpha = *alpha;
    if (estimators) apply_setting(c, "estimators", *estimators);
    if (rerandomize) c.rerandomize = true;
    // Precedence: --seed, then the config file, then NETAB_SEED.
    if (seed || !seed_in_file) c.seed = resolve_seed(seed, kDefaultSeed);
    c.validate();
    return c;
  }

  int run(std::ostream& out) const {
    const ExperimentConfig c = config();
    std::vector<ReportFormat> formats;
    if (format == "all") {
      formats = {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown};
    } else {
      auto f = parse_report_format(format);
      if (!f) throw ValidationError("unknown format '" + format + "'");
      formats = {*f};
    }
    const Graph g = load_graph(c);
    const StudyReport report = run_study(c, g);

    std::filesystem::create_directories(out_dir);
    const std::string stem = "study_" + std::string(model_name(c.model));
    for (ReportFormat f : formats) {
      const auto path = std::filesystem::path(out_dir) / (stem + "." + std::string(report_format_extension(f)));
      write_text(path.string(), export_report(report, f));
    }
    out << export_report(report, ReportFormat::Markdown);
    return kOk;
  }
};

// ---------------------------------------------------------------- report

struct ReportCmd {
  std::string input;
  std::string format = "markdown";
  std::string out_path;

  int run(std::ostream& out) const {
    auto f = parse_report_format(format);
    if (!f) throw ValidationError("unknown format '" + format + "'");
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open report file '" + input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = export_report(report_from_json(ss.str()), *f);
    if (out_path.empty()) {
      out << text;
    } else {
      write_text(out_path, text);
    }
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and analyse A/B tests on networks with interference"};
  app.require_subcommand(1);

  SimulateCmd sim;
  auto* sim_app = app.add_subcommand("simulate", "Draw a treatment and responses; write node_id,z,g,y CSV");
  sim.graph.add(sim_app);
  sim.model.add(sim_app);
  sim_app->add_option("--p", sim.p, "Treatment probability");
  sim_app->add_option("--treatment", sim.treatment, "Explicit treatment vector, e.g. 1,0,1");
  sim_app->add_option("--seed", sim.seed, "Random seed (falls back to NETAB_SEED)");
  sim_app->add_option("--out", sim.out_path, "Output CSV (default: stdout)");

  EstimateCmd est;
  auto* est_app = app.add_subcommand("estimate", "Estimate the ATE from a response CSV");
  est_app->add_option("--input", est.input, "Response CSV")->required();
  est_app->add_option("--estimator", est.estimator, "sutva | tau-dim | linear | tau-ols | probit | logit");
  est_app->add_option("--tau", est.tau, "Saturation threshold");
  est_app->add_flag("--json", est.as_json, "Machine-readable output");

  BoundsCmd bnd;
  auto* bnd_app = app.add_subcommand("bounds", "Cramer-Rao bounds for a realized design");
  bnd_app->add_option("--input", bnd.input, "Response CSV supplying z and g");
  bnd.graph.add(bnd_app);
  bnd.model.add(bnd_app);
  bnd_app->add_option("--p", bnd.p, "Treatment probability");
  bnd_app->add_option("--seed", bnd.seed, "Random seed (falls back to NETAB_SEED)");
  bnd_app->add_flag("--json", bnd.as_json, "Machine-readable output");

  StudyCmd study;
  auto* st_app = app.add_subcommand("study", "Run a replicated misspecification study");
  st_app->add_option("--config", study.config_path, "Key-value configuration file");
  st_app->add_option("--graph", study.graph, "Edge-list file");
  st_app->add_option("--er-nodes", study.er_nodes, "Nodes of the generated graph");
  st_app->add_option("--er-degree", study.er_degree, "Mean degree of the generated graph");
  st_app->add_option("--model", study.model, "Generating model");
  st_app->add_option("--beta", study.betas, "Coefficient vector b0,b1,b2 (repeatable)");
  st_app->add_option("--sigma", study.sigma, "Noise standard deviation");
  st_app->add_option("--tau", study.tau, "Saturation threshold");
  st_app->add_option("--reps", study.reps, "Replications");
  st_app->add_option("--seed", study.seed, "Master seed (falls back to NETAB_SEED)");
  st_app->add_option("--threads", study.threads, "Worker threads (0 = all cores)");
  st_app->add_option("--alpha", study.alpha, "Significance level of the Welch test");
  st_app->add_option("--estimators", study.estimators, "Comma-separated estimator list");
  st_app->add_flag("--rerandomize", study.rerandomize, "Fresh treatment vector per replication");
  st_app->add_option("--out", study.out_dir, "Output directory");
  st_app->add_option("--format", study.format, "all | csv | json | markdown");

  ReportCmd rep;
  auto* rep_app = app.add_subcommand("report", "Re-export a JSON study report");
  rep_app->add_option("--input", rep.input, "Report JSON")->required();
  rep_app->add_option("--format", rep.format, "csv | json | markdown");
  rep_app->add_option("--out", rep.out_path, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (sim_app->parsed()) return sim.run(out);
    if (est_app->parsed()) return est.run(out);
    if (bnd_app->parsed()) return bnd.run(out);
    if (st_app->parsed()) return study.run(out);
    if (rep_app->parsed()) return rep.run(out);
  } catch (const EstimatorError& e) {
    err << "estimator failure: " << e.what() << '\n';
    return kEstimatorFailure;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kConfigError;
  } catch (const ContractViolation& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

}  // namespace netab::cli
