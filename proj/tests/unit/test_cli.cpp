#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "netab/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = netab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("netab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("NETAB_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
  const std::string fixture_ = std::string(NETAB_FIXTURE_DIR) + "/path3.txt";
};

}  // namespace

TEST_F(CliTest, SimulateNoiselessPath) {
  const CliRun r = cli({"simulate", "--graph", fixture_, "--model", "linear", "--beta", "0,1,1", "--sigma", "1e-12",
                     "--treatment", "1,0,1", "--out", path("y.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("true_ate 2"), std::string::npos);
  std::istringstream in(slurp(path("y.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "node_id,z,g,y");
  const double want_g[] = {0, 1, 0};
  for (int i = 0; i < 3; ++i) {
    std::getline(in, line);
    std::stringstream ss(line);
    std::string id, z, g, y;
    std::getline(ss, id, ',');
    std::getline(ss, z, ',');
    std::getline(ss, g, ',');
    std::getline(ss, y, ',');
    EXPECT_EQ(std::stod(g), want_g[i]);
    EXPECT_NEAR(std::stod(y), 1.0, 1e-9);
  }
}

TEST_F(CliTest, SimulateDeterministicWithSeedAndEnv) {
  const std::vector<std::string> base{"simulate", "--er-nodes", "300", "--er-degree", "5", "--model", "probit"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return cli(a);
  };
  const CliRun a = with({"--seed", "5"});
  const CliRun b = with({"--seed", "5"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, with({"--seed", "6"}).out);
  setenv("NETAB_SEED", "5", 1);
  EXPECT_EQ(with({}).out, a.out);
  setenv("NETAB_SEED", "five", 1);
  EXPECT_EQ(with({}).code, netab::cli::kConfigError);
  unsetenv("NETAB_SEED");
}

TEST_F(CliTest, MissingFileIsIoError) {
  const CliRun r = cli({"simulate", "--graph", "/no/such/graph.txt"});
  EXPECT_EQ(r.code, netab::cli::kIoError);
  EXPECT_NE(r.err.find("/no/such/graph.txt"), std::string::npos);
  EXPECT_EQ(cli({"estimate", "--input", "/no/such/y.csv"}).code, netab::cli::kIoError);
}

TEST_F(CliTest, ValidationErrors) {
  EXPECT_EQ(cli({"simulate", "--graph", fixture_, "--sigma", "0"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"simulate", "--graph", fixture_, "--model", "cubic"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"simulate", "--graph", fixture_, "--treatment", "1,0"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"frobnicate"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, EstimateSutvaOnUnitEffect) {
  const std::string f = write("y.csv", "node_id,z,g,y\n0,1,0,1\n1,0,1,0\n2,1,0,1\n3,0,0.5,0\n");
  const CliRun r = cli({"estimate", "--input", f, "--estimator", "sutva", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ate_hat"].get<double>(), 1.0);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST_F(CliTest, EstimateEmptyClassIsEstimatorFailure) {
  const std::string f = write("y.csv", "node_id,z,g,y\n0,1,1,1\n1,1,1,0\n2,1,1,1\n");
  const CliRun r = cli({"estimate", "--input", f, "--estimator", "tau-dim"});
  EXPECT_EQ(r.code, netab::cli::kEstimatorFailure);
  EXPECT_NE(r.err.find("|C0| = 0"), std::string::npos);
}

TEST_F(CliTest, EstimateOlsRecoversNoiselessCoefficients) {
  ASSERT_EQ(cli({"simulate", "--er-nodes", "200", "--er-degree", "4", "--model", "linear", "--beta", "0.5,1,2",
                 "--sigma", "1e-13", "--seed", "3", "--out", path("y.csv")})
                .code,
            0);
  const CliRun r = cli({"estimate", "--input", path("y.csv"), "--estimator", "linear", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["beta_hat"][0].get<double>(), 0.5, 1e-10);
  EXPECT_NEAR(j["beta_hat"][1].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(j["beta_hat"][2].get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(j["ate_hat"].get<double>(), 3.0, 1e-10);
}

TEST_F(CliTest, MalformedResponseFileIsParseError) {
  const std::string f = write("y.csv", "node,z,g,y\n0,1,0,1\n");
  EXPECT_EQ(cli({"estimate", "--input", f}).code, netab::cli::kIoError);
  const std::string g = write("g.csv", "node_id,z,g,y\n0,2,0,1\n");
  EXPECT_EQ(cli({"estimate", "--input", g}).code, netab::cli::kIoError);
}

TEST_F(CliTest, BoundsForEveryModel) {
  for (const char* m : {"linear", "probit", "logistic", "tau-exposure", "tau-exposure-binary"}) {
    const CliRun r = cli({"bounds", "--er-nodes", "500", "--er-degree", "3", "--model", m, "--json"});
    ASSERT_EQ(r.code, 0) << m << ": " << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.contains("crlb") || j.contains("mse_diff_in_means")) << m;
  }
}

TEST_F(CliTest, StudyWritesAllFormatsAndIsDeterministic) {
  const std::string cfg = write("s.cfg", "er_nodes = 300\ner_mean_degree = 4\nreplications = 20\nmodel = linear\n");
  const CliRun a = cli({"study", "--config", cfg, "--threads", "1", "--out", path("a")});
  ASSERT_EQ(a.code, 0) << a.err;
  const CliRun b = cli({"study", "--config", cfg, "--threads", "3", "--out", path("b")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  for (const char* ext : {"csv", "json", "md"}) {
    const std::string name = std::string("study_linear.") + ext;
    ASSERT_TRUE(fs::exists(dir_ / "a" / name)) << name;
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
  EXPECT_NE(a.out.find("| sutva |"), std::string::npos);

  const CliRun rep = cli({"report", "--input", path("a/study_linear.json"), "--format", "markdown"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out, slurp(dir_ / "a" / "study_linear.md"));
  const CliRun csv = cli({"report", "--input", path("a/study_linear.json"), "--format", "csv"});
  EXPECT_EQ(csv.out, slurp(dir_ / "a" / "study_linear.csv"));
}

TEST_F(CliTest, StudySeedPrecedence) {
  const std::string with_seed = write("s1.cfg", "er_nodes = 200\ner_mean_degree = 4\nreplications = 5\nseed = 11\n");
  const std::string no_seed = write("s2.cfg", "er_nodes = 200\ner_mean_degree = 4\nreplications = 5\n");
  const auto seed_of = [&](const std::vector<std::string>& args) {
    auto a = args;
    a.insert(a.end(), {"--out", path("o"), "--format", "json"});
    const CliRun r = cli(a);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(slurp(dir_ / "o" / "study_linear.json"))["seed"].get<std::uint64_t>();
  };
  setenv("NETAB_SEED", "99", 1);
  EXPECT_EQ(seed_of({"study", "--config", with_seed}), 11u);
  EXPECT_EQ(seed_of({"study", "--config", no_seed}), 99u);
  EXPECT_EQ(seed_of({"study", "--config", with_seed, "--seed", "7"}), 7u);
  unsetenv("NETAB_SEED");
  EXPECT_EQ(seed_of({"study", "--config", no_seed}), 20180701u);
}

TEST_F(CliTest, StudyOverridesAndValidation) {
  const CliRun r = cli({"study", "--er-nodes", "200", "--er-degree", "4", "--model", "probit", "--beta", "0,1,1",
                     "--beta", "0,0,1", "--reps", "5", "--out", path("o"), "--format", "markdown"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "study_probit.md"));
  EXPECT_FALSE(fs::exists(dir_ / "o" / "study_probit.csv"));
  EXPECT_NE(r.out.find("(0,1,1)"), std::string::npos);
  EXPECT_EQ(cli({"study", "--er-nodes", "200", "--reps", "1"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"study", "--er-nodes", "200", "--format", "xml"}).code, netab::cli::kConfigError);
  EXPECT_EQ(cli({"study", "--config", "/no/such.cfg"}).code, netab::cli::kIoError);
}
