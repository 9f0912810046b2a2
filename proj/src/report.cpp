#include "netab/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "netab/error.hpp"

namespace netab {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string mse_text(double v) {
  if (std::isnan(v)) return "n/a";
  if (v != 0.0 && std::abs(v) < 5e-6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
  }
  return fixed(v, 5);
}

std::string short_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string beta_text(const Vec3& b) {
  std::string s = "(";
  for (std::size_t k = 0; k < 3; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", b[k]);
    s += buf;
    if (k < 2) s += ",";
  }
  return s + ")";
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

double get_num(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }
std::optional<double> get_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

void write_csv(const StudyReport& r, std::ostream& out) {
  out << "row_type,model,beta0,beta1,beta2,true_ate,estimator,replication,estimate,mse,ci_low,ci_high,"
         "mean_estimate,crlb,closed_form_mse,welch_p,best,significant,n_ok,n_failed\n";
  const std::string model(model_name(r.model));
  auto prefix = [&](const char* type, const ColumnReport& col, const CellReport& cell) {
    out << type << ',' << model << ',' << format_double(col.beta[0]) << ',' << format_double(col.beta[1]) << ','
        << format_double(col.beta[2]) << ',' << format_double(col.true_ate) << ',' << estimator_name(cell.estimator)
        << ',';
  };
  for (const ColumnReport& col : r.columns) {
    for (const CellReport& cell : col.cells) {
      prefix("summary", col, cell);
      out << ",," << format_double(cell.mse) << ',' << format_double(cell.ci_low) << ','
          << format_double(cell.ci_high) << ',' << format_double(cell.mean_estimate) << ',' << opt_text(cell.crlb)
          << ',' << opt_text(cell.closed_form_mse) << ',' << opt_text(cell.welch_p) << ',' << (cell.best ? 1 : 0)
          << ',' << (cell.significant ? 1 : 0) << ',' << cell.n_ok << ',' << cell.n_failed << '\n';
    }
  }
  for (const ColumnReport& col : r.columns) {
    for (const CellReport& cell : col.cells) {
      for (std::size_t i = 0; i < cell.estimates.size(); ++i) {
        prefix("raw", col, cell);
        const double e = cell.estimates[i];
        out << i << ',' << (std::isnan(e) ? "" : format_double(e)) << ",,,,,,,,,,,\n";
      }
    }
  }
}

json to_json(const StudyReport& r) {
  json j;
  j["model"] = std::string(model_name(r.model));
  j["sigma"] = r.sigma;
  j["tau"] = r.tau;
  j["replications"] = r.replications;
  j["treatment_prob"] = r.treatment_prob;
  j["seed"] = r.seed;
  j["alpha"] = r.alpha;
  j["rerandomize"] = r.rerandomize;
  j["n_nodes"] = r.n_nodes;
  j["n_edges"] = r.n_edges;
  json cols = json::array();
  for (const ColumnReport& col : r.columns) {
    json c;
    c["beta"] = {col.beta[0], col.beta[1], col.beta[2]};
    c["true_ate"] = col.true_ate;
    c["n_treated"] = col.n_treated;
    c["class_sizes"] = {{"c0", col.n_c0}, {"c0_bar", col.n_c0_bar}, {"c1", col.n_c1}, {"c1_bar", col.n_c1_bar}};
    json cells = json::array();
    for (const CellReport& cell : col.cells) {
      json e;
      e["estimator"] = std::string(estimator_name(cell.estimator));
      e["n_ok"] = cell.n_ok;
      e["n_failed"] = cell.n_failed;
      e["mse"] = num(cell.mse);
      e["ci95"] = {num(cell.ci_low), num(cell.ci_high)};
      e["mean_estimate"] = num(cell.mean_estimate);
      e["crlb"] = opt_num(cell.crlb);
      e["closed_form_mse"] = opt_num(cell.closed_form_mse);
      e["welch_p"] = opt_num(cell.welch_p);
      e["best"] = cell.best;
      e["significant"] = cell.significant;
      e["failure"] = cell.failure ? json(*cell.failure) : json(nullptr);
      json est = json::array();
      for (double v : cell.estimates) est.push_back(num(v));
      e["estimates"] = std::move(est);
      cells.push_back(std::move(e));
    }
    c["cells"] = std::move(cells);
    cols.push_back(std::move(c));
  }
  j["columns"] = std::move(cols);
  return j;
}

void write_markdown(const StudyReport& r, std::ostream& out) {
  out << "### MSE of the estimated ATE, " << model_name(r.model) << " responses\n\n";
  out << "N = " << r.n_nodes << " nodes, " << r.n_edges << " edges, R = " << r.replications
      << " replications, sigma = " << short_text(r.sigma) << ", tau = " << short_text(r.tau) << ", seed = "
      << r.seed << "\n\n";

  out << "| Estimator |";
  for (const ColumnReport& col : r.columns) out << ' ' << beta_text(col.beta) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << "---:|";
  out << "\n| |";
  for (const ColumnReport& col : r.columns) out << " ATE = " << fixed(col.true_ate, 2) << " |";
  out << '\n';

  // Row order follows the first column; every column holds the same estimators.
  if (!r.columns.empty()) {
    for (std::size_t e = 0; e < r.columns.front().cells.size(); ++e) {
      out << "| " << estimator_name(r.columns.front().cells[e].estimator) << " |";
      for (const ColumnReport& col : r.columns) {
        const CellReport& cell = col.cells[e];
        std::string v = mse_text(cell.mse);
        if (cell.best) v = "**" + v + "**";
        if (cell.significant) v += "*";
        if (cell.n_failed > 0) v += " †";
        out << ' ' << v << " |";
      }
      out << '\n';
    }
  }

  out << "\nBold: smallest MSE in the column. *: Welch p < " << short_text(r.alpha)
      << " against the bold cell.\n";
  bool header = false;
  for (const ColumnReport& col : r.columns) {
    for (const CellReport& cell : col.cells) {
      if (cell.n_failed == 0) continue;
      if (!header) {
        out << "\nFailures (†, excluded from the MSE):\n\n";
        header = true;
      }
      out << "- " << estimator_name(cell.estimator) << " at beta = " << beta_text(col.beta) << ": "
          << cell.n_failed << " of " << cell.estimates.size() << " replications failed";
      if (cell.failure) out << " (first: " << *cell.failure << ")";
      out << '\n';
    }
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "csv") return ReportFormat::Csv;
  if (key == "json") return ReportFormat::Json;
  if (key == "markdown" || key == "md") return ReportFormat::Markdown;
  return std::nullopt;
}

std::string_view report_format_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv:
      return "csv";
    case ReportFormat::Json:
      return "json";
    case ReportFormat::Markdown:
      return "md";
  }
  return "txt";
}

void export_report(const StudyReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Csv:
      write_csv(report, out);
      break;
    case ReportFormat::Json:
      out << to_json(report).dump(1) << '\n';
      break;
    case ReportFormat::Markdown:
      write_markdown(report, out);
      break;
  }
  if (!out) throw IoError("failed to write report");
}

std::string export_report(const StudyReport& report, ReportFormat format) {
  std::ostringstream ss;
  export_report(report, format, ss);
  return ss.str();
}

StudyReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    StudyReport r;
    auto model = parse_model(j.at("model").get<std::string>());
    if (!model) throw ParseError("unknown model in report", 0);
    r.model = *model;
    r.sigma = j.at("sigma").get<double>();
    r.tau = j.at("tau").get<double>();
    r.replications = j.at("replications").get<std::size_t>();
    r.treatment_prob = j.at("treatment_prob").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.alpha = j.at("alpha").get<double>();
    r.rerandomize = j.at("rerandomize").get<bool>();
    r.n_nodes = j.at("n_nodes").get<std::size_t>();
    r.n_edges = j.at("n_edges").get<std::size_t>();
    for (const json& c : j.at("columns")) {
      ColumnReport col;
      const json& b = c.at("beta");
      col.beta = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>()};
      col.true_ate = c.at("true_ate").get<double>();
      col.n_treated = c.at("n_treated").get<std::size_t>();
      const json& cs = c.at("class_sizes");
      col.n_c0 = cs.at("c0").get<std::size_t>();
      col.n_c0_bar = cs.at("c0_bar").get<std::size_t>();
      col.n_c1 = cs.at("c1").get<std::size_t>();
      col.n_c1_bar = cs.at("c1_bar").get<std::size_t>();
      for (const json& e : c.at("cells")) {
        CellReport cell;
        auto est = parse_estimator(e.at("estimator").get<std::string>());
        if (!est) throw ParseError("unknown estimator in report", 0);
        cell.estimator = *est;
        cell.n_ok = e.at("n_ok").get<std::size_t>();
        cell.n_failed = e.at("n_failed").get<std::size_t>();
        cell.mse = get_num(e.at("mse"));
        cell.ci_low = get_num(e.at("ci95").at(0));
        cell.ci_high = get_num(e.at("ci95").at(1));
        cell.mean_estimate = get_num(e.at("mean_estimate"));
        cell.crlb = get_opt(e.at("crlb"));
        cell.closed_form_mse = get_opt(e.at("closed_form_mse"));
        cell.welch_p = get_opt(e.at("welch_p"));
        cell.best = e.at("best").get<bool>();
        cell.significant = e.at("significant").get<bool>();
        if (!e.at("failure").is_null()) cell.failure = e.at("failure").get<std::string>();
        for (const json& v : e.at("estimates")) cell.estimates.push_back(get_num(v));
        col.cells.push_back(std::move(cell));
      }
      r.columns.push_back(std::move(col));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what(), 0);
  }
}

}  // namespace netab
