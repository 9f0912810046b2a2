#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>

#include "netab/error.hpp"
#include "netab/graph.hpp"
#include "oracles.hpp"

using namespace netab;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

std::vector<NodeId> adj(const Graph& g, NodeId i) {
  auto s = g.neighbors(i);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(ParseEdgeList, PathGraph) {
  const Graph g = parse("0 1\n1 2");
  EXPECT_EQ(g.n_nodes(), 3u);
  EXPECT_EQ(g.n_edges(), 2u);
  EXPECT_EQ(adj(g, 1), (std::vector<NodeId>{0, 2}));
}

TEST(ParseEdgeList, DuplicatesAndSelfLoopsDropped) {
  const Graph g = parse("0 1\n1 0\n0 0");
  EXPECT_EQ(g.n_nodes(), 2u);
  EXPECT_EQ(g.n_edges(), 1u);
}

TEST(ParseEdgeList, CommentsBlankLinesAndExtraColumns) {
  const Graph g = parse("# FromNodeId ToNodeId\n% other\n\n10,20,5,1289241911\n20,30,-1,1289241912\n");
  EXPECT_EQ(g.n_nodes(), 3u);
  EXPECT_EQ(g.n_edges(), 2u);
  EXPECT_EQ(g.labels(), (std::vector<std::int64_t>{10, 20, 30}));
}

TEST(ParseEdgeList, SparseIdsAreDensifiedInOrder) {
  const Graph g = parse("1000 7\n7 3\n");
  EXPECT_EQ(g.labels(), (std::vector<std::int64_t>{3, 7, 1000}));
  EXPECT_EQ(adj(g, 1), (std::vector<NodeId>{0, 2}));
}

TEST(ParseEdgeList, MalformedLineReportsLineNumber) {
  try {
    parse("0 1\n1 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("0\n"), ParseError);
}

TEST(ParseEdgeList, EmptyInputIsAnError) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# only comments\n"), ParseError);
}

TEST(ParseEdgeList, MissingFileNamesPath) {
  try {
    load_edge_list("/nonexistent/graph.txt");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/graph.txt"), std::string::npos);
  }
}

TEST(ParseEdgeList, FixtureFile) {
  const Graph g = load_edge_list(std::string(NETAB_FIXTURE_DIR) + "/path3.txt");
  EXPECT_EQ(g.n_nodes(), 3u);
  EXPECT_EQ(g.n_edges(), 2u);
}

TEST(ParseEdgeList, WikiVoteNodeCount) {
  const std::string path = std::string(NETAB_SOURCE_DIR) + "/data/wiki-Vote.txt";
  if (!std::filesystem::exists(path)) GTEST_SKIP() << "dataset not present at " << path;
  EXPECT_EQ(load_edge_list(path).n_nodes(), 7115u);
}

TEST(ParseEdgeList, SymmetrizationIdempotence) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 29);
  std::string fwd, rev, both;
  for (int e = 0; e < 80; ++e) {
    const int a = pick(rng), b = pick(rng);
    fwd += std::to_string(a) + " " + std::to_string(b) + "\n";
    rev += std::to_string(b) + " " + std::to_string(a) + "\n";
    both += std::to_string(a) + " " + std::to_string(b) + "\n" + std::to_string(b) + " " + std::to_string(a) + "\n";
  }
  EXPECT_EQ(parse(fwd), parse(rev));
  EXPECT_EQ(parse(fwd), parse(both));
}

TEST(TreatedFraction, PathExample) {
  const Graph g = parse("0 1\n1 2");
  EXPECT_EQ(treated_fraction(g, TreatmentVector({1, 0, 1})), (ExposureVector{0.0, 1.0, 0.0}));
}

TEST(TreatedFraction, AllTreatedGivesOneExceptIsolated) {
  const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}, {2, 0}, {3, 4}};
  const Graph g = Graph::from_edges(6, edges);
  const ExposureVector f = treated_fraction(g, TreatmentVector(std::vector<std::uint8_t>(6, 1)));
  for (NodeId i = 0; i < 5; ++i) EXPECT_EQ(f[i], 1.0);
  EXPECT_EQ(f[5], 0.0);
}

TEST(TreatedFraction, LengthMismatchIsContractViolation) {
  const Graph g = parse("0 1\n1 2");
  EXPECT_THROW(treated_fraction(g, TreatmentVector({1, 0})), ContractViolation);
}

TEST(TreatedFraction, MatchesCountingOracleOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20;
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    std::vector<std::pair<NodeId, NodeId>> edges(40);
    for (auto& e : edges) e = {pick(rng), pick(rng)};
    std::vector<std::uint8_t> z(n);
    for (auto& v : z) v = static_cast<std::uint8_t>(rng() & 1u);
    const Graph g = Graph::from_edges(n, edges);
    const ExposureVector got = treated_fraction(g, TreatmentVector(z));
    const std::vector<double> want = oracle::count_fraction(n, edges, z);
    for (std::size_t i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(got[i], want[i]) << "node " << i;
  }
}

TEST(TreatedFraction, ComplementSumsToOne) {
  const Graph g = erdos_renyi(300, 4.0, 9);
  std::mt19937_64 rng(3);
  std::vector<std::uint8_t> zs(g.n_nodes());
  for (auto& v : zs) v = static_cast<std::uint8_t>(rng() & 1u);
  const TreatmentVector z(zs);
  const ExposureVector a = treated_fraction(g, z);
  const ExposureVector b = treated_fraction(g, z.complement());
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    if (g.degree(i) > 0) EXPECT_NEAR(a[i] + b[i], 1.0, 1e-15);
  }
}

TEST(TreatedFraction, PermutationEquivariant) {
  const std::size_t n = 200;
  const Graph g = erdos_renyi(n, 6.0, 21);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::mt19937_64 rng(8);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(i)) edges.emplace_back(perm[i], perm[j]);
  }
  const Graph h = Graph::from_edges(n, edges);

  std::vector<std::uint8_t> z(n), zp(n);
  for (NodeId i = 0; i < n; ++i) {
    z[i] = static_cast<std::uint8_t>(rng() & 1u);
    zp[perm[i]] = z[i];
  }
  const ExposureVector a = treated_fraction(g, TreatmentVector(z));
  const ExposureVector b = treated_fraction(h, TreatmentVector(zp));
  for (NodeId i = 0; i < n; ++i) EXPECT_EQ(a[i], b[perm[i]]);
}

TEST(ErdosRenyi, DeterministicAndNearMeanDegree) {
  const Graph a = erdos_renyi(2000, 12.0, 1);
  const Graph b = erdos_renyi(2000, 12.0, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, erdos_renyi(2000, 12.0, 2));
  const double mean_degree = 2.0 * static_cast<double>(a.n_edges()) / 2000.0;
  // Edge count is Binomial(n(n-1)/2, p); its SD in mean-degree units is about 0.08.
  EXPECT_NEAR(mean_degree, 12.0, 0.5);
}

TEST(TreatmentVector, RejectsNonBinaryEntries) {
  EXPECT_THROW(TreatmentVector({0, 2}), ContractViolation);
  const TreatmentVector z({1, 0, 1});
  EXPECT_EQ(z.n_treated(), 2u);
  EXPECT_EQ(z.complement(), TreatmentVector({0, 1, 0}));
}
