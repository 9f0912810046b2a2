#include "netab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "netab/error.hpp"

namespace netab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not a number");
  }
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not a non-negative integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  std::string s;
  for (char c : v) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not a boolean");
}

}  // namespace

Vec3 parse_beta(std::string_view text) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != 3) throw ValidationError("beta: expected three comma-separated values, got '" + std::string(text) + "'");
  return {to_double("beta", parts[0]), to_double("beta", parts[1]), to_double("beta", parts[2])};
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value, const std::string& base_dir) {
  value = trim(value);
  if (key == "graph") {
    std::filesystem::path p{std::string(value)};
    if (!base_dir.empty() && p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.graph_path = value.empty() ? std::string() : p.string();
  } else if (key == "er_nodes") {
    c.er_nodes = to_int<std::size_t>(key, value);
  } else if (key == "er_mean_degree") {
    c.er_mean_degree = to_double(key, value);
  } else if (key == "er_seed") {
    c.er_seed = to_int<std::uint64_t>(key, value);
  } else if (key == "model") {
    auto m = parse_model(value);
    if (!m) throw ValidationError("model: unknown model '" + std::string(value) + "'");
    c.model = *m;
  } else if (key == "beta") {
    c.beta_grid.clear();
    for (std::string_view triple : split(value, ';')) {
      if (!triple.empty()) c.beta_grid.push_back(parse_beta(triple));
    }
  } else if (key == "sigma") {
    c.sigma = to_double(key, value);
  } else if (key == "tau") {
    c.tau = to_double(key, value);
  } else if (key == "replications" || key == "reps") {
    c.replications = to_int<std::size_t>(key, value);
  } else if (key == "treatment_prob") {
    c.treatment_prob = to_double(key, value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "alpha") {
    c.alpha = to_double(key, value);
  } else if (key == "threads") {
    c.threads = to_int<unsigned>(key, value);
  } else if (key == "rerandomize") {
    c.rerandomize = to_bool(key, value);
  } else if (key == "estimators") {
    c.estimators.clear();
    for (std::string_view name : split(value, ',')) {
      auto e = parse_estimator(name);
      if (!e) throw ValidationError("estimators: unknown estimator '" + std::string(name) + "'");
      c.estimators.push_back(*e);
    }
  } else {
    throw ValidationError("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
  ExperimentConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(c, trim(body.substr(0, eq)), body.substr(eq + 1), base_dir);
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, std::filesystem::path(path).parent_path().string());
}

}  // namespace netab
