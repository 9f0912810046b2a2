#include "netab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "netab/error.hpp"
#include "netab/kernels.hpp"

namespace netab {

Graph Graph::from_edges(std::size_t n_nodes, std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<std::int64_t> labels) {
  std::vector<std::size_t> degree(n_nodes, 0);
  for (auto [a, b] : edges) {
    if (a >= n_nodes || b >= n_nodes) throw ContractViolation("edge endpoint outside node range");
    if (a == b) continue;
    ++degree[a];
    ++degree[b];
  }

  Graph g;
  g.offsets_.assign(n_nodes + 1, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  std::vector<NodeId> raw(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    raw[cursor[a]++] = b;
    raw[cursor[b]++] = a;
  }

  // Sort and deduplicate each list, then compact.
  std::vector<std::size_t> offsets(n_nodes + 1, 0);
  std::size_t out = 0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    auto uniq_end = std::unique(first, last);
    offsets[i] = out;
    for (auto it = first; it != uniq_end; ++it) raw[out++] = *it;
  }
  offsets[n_nodes] = out;
  raw.resize(out);
  raw.shrink_to_fit();

  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(raw);
  if (!labels.empty() && labels.size() != n_nodes) throw ContractViolation("label count differs from node count");
  g.labels_ = std::move(labels);
  return g;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits off the next field; returns false when none remain.
bool next_field(std::string_view& rest, bool comma, std::string_view& field) {
  if (comma) {
    if (rest.empty()) return false;
    auto pos = rest.find(',');
    field = trim(rest.substr(0, pos));
    rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
    return true;
  }
  while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
  if (rest.empty()) return false;
  std::size_t end = 0;
  while (end < rest.size() && !is_space(rest[end])) ++end;
  field = rest.substr(0, end);
  rest.remove_prefix(end);
  return true;
}

std::int64_t parse_id(std::string_view field, std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("node id '" + std::string(field) + "' is not an integer", line_no);
  }
  return v;
}

}  // namespace

Graph parse_edge_list(std::istream& in, const ParseOptions& options) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw_edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == '%') continue;

    bool comma = options.separator == Separator::Comma ||
                 (options.separator == Separator::Auto && body.find(',') != std::string_view::npos);
    std::string_view a, b;
    std::string_view rest = body;
    if (!next_field(rest, comma, a) || !next_field(rest, comma, b)) {
      throw ParseError("expected at least two node ids", line_no);
    }
    raw_edges.emplace_back(parse_id(a, line_no), parse_id(b, line_no));
  }
  if (raw_edges.empty()) throw ParseError("edge list contains no edges", 0);

  std::vector<std::int64_t> ids;
  ids.reserve(raw_edges.size() * 2);
  for (auto [a, b] : raw_edges) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > std::numeric_limits<NodeId>::max() / 2) throw ParseError("too many distinct node ids", 0);

  auto dense = [&ids](std::int64_t id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw_edges.size());
  for (auto [a, b] : raw_edges) edges.emplace_back(dense(a), dense(b));

  const std::size_t n = ids.size();
  return Graph::from_edges(n, edges, std::move(ids));
}

Graph load_edge_list(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  try {
    return parse_edge_list(in, options);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

Graph erdos_renyi(std::size_t n_nodes, double mean_degree, std::uint64_t seed) {
  if (n_nodes < 2) throw ValidationError("erdos_renyi: need at least two nodes");
  if (!(mean_degree >= 0.0) || mean_degree > static_cast<double>(n_nodes - 1)) {
    throw ValidationError("erdos_renyi: mean degree must lie in [0, n - 1]");
  }
  const double p = mean_degree / static_cast<double>(n_nodes - 1);
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (p > 0.0) {
    // Geometric skipping over the lower triangle (Batagelj & Brandes).
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto n = static_cast<std::int64_t>(n_nodes);
    while (v < n) {
      double r = unif(rng);
      w += 1 + (p >= 1.0 ? 0 : static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q)));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
  }
  return Graph::from_edges(n_nodes, edges);
}

TreatmentVector::TreatmentVector(std::vector<std::uint8_t> z) : z_(std::move(z)) {
  for (auto v : z_) {
    if (v > 1) throw ContractViolation("treatment entries must be 0 or 1");
  }
}

std::size_t TreatmentVector::n_treated() const { return static_cast<std::size_t>(std::count(z_.begin(), z_.end(), 1)); }

TreatmentVector TreatmentVector::complement() const {
  std::vector<std::uint8_t> c(z_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) c[i] = static_cast<std::uint8_t>(1 - z_[i]);
  return TreatmentVector(std::move(c));
}

std::vector<double> TreatmentVector::as_doubles() const { return {z_.begin(), z_.end()}; }

ExposureVector treated_fraction(const Graph& graph, const TreatmentVector& z) {
  if (z.size() != graph.n_nodes()) {
    throw ContractViolation("treated_fraction: treatment length " + std::to_string(z.size()) +
                            " differs from node count " + std::to_string(graph.n_nodes()));
  }
  const std::vector<double> zd = z.as_doubles();
  ExposureVector g(graph.n_nodes(), 0.0);
  for (NodeId i = 0; i < graph.n_nodes(); ++i) {
    const auto nbrs = graph.neighbors(i);
    if (nbrs.empty()) continue;
    g[i] = kernels::gather_sum(zd, nbrs) / static_cast<double>(nbrs.size());
  }
  return g;
}

}  // namespace netab
