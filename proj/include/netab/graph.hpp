#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netab {

using NodeId = std::uint32_t;

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are sorted, symmetric and free of self-loops and duplicates.
/// Safe to share between threads once built.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list over ids in [0, n_nodes). Edges are
  /// symmetrized; self-loops and duplicates are dropped.
  static Graph from_edges(std::size_t n_nodes, std::span<const std::pair<NodeId, NodeId>> edges,
                          std::vector<std::int64_t> labels = {});

  std::size_t n_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t n_edges() const { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  /// Original id of each dense node as it appeared in the input file; empty
  /// when the graph was not parsed from text.
  const std::vector<std::int64_t>& labels() const { return labels_; }

  bool operator==(const Graph& other) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::int64_t> labels_;
};

enum class Separator { Auto, Whitespace, Comma };

struct ParseOptions {
  Separator separator = Separator::Auto;
};

/// Reads a SNAP-style edge list. Lines starting with '#' or '%' and blank
/// lines are skipped; columns after the first two are ignored. Node ids are
/// remapped to 0..n-1 in increasing order of the original id.
Graph parse_edge_list(std::istream& in, const ParseOptions& options = {});
Graph load_edge_list(const std::string& path, const ParseOptions& options = {});

/// G(n, p) random graph with p = mean_degree / (n - 1).
Graph erdos_renyi(std::size_t n_nodes, double mean_degree, std::uint64_t seed);

/// Per-node treatment assignment, each entry 0 or 1.
class TreatmentVector {
 public:
  TreatmentVector() = default;
  explicit TreatmentVector(std::vector<std::uint8_t> z);

  std::size_t size() const { return z_.size(); }
  std::uint8_t operator[](std::size_t i) const { return z_[i]; }
  std::span<const std::uint8_t> values() const { return z_; }
  std::size_t n_treated() const;
  TreatmentVector complement() const;
  /// Entries widened to double, the layout the numeric kernels consume.
  std::vector<double> as_doubles() const;

  bool operator==(const TreatmentVector&) const = default;

 private:
  std::vector<std::uint8_t> z_;
};

/// Fraction of treated neighbors g_i in [0, 1]; 0 for isolated nodes.
using ExposureVector = std::vector<double>;

ExposureVector treated_fraction(const Graph& graph, const TreatmentVector& z);

}  // namespace netab
