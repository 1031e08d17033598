#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pairopt/io.hpp"
#include "pairopt/pairmat.hpp"

namespace pairopt {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pairopt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI, capturing stdout and stderr, and returns the exit status.
  int run(const std::string& args) {
    const std::string cmd =
        std::string(PAIROPT_CLI_PATH) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    out_ = slurp(path("stdout"));
    err_ = slurp(path("stderr"));
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
  std::string out_;
  std::string err_;
};

const char* kFiveSeven = "n=4\n0,5,0,0\n5,0,0,0\n0,0,0,7\n0,0,7,0\n";

TEST_F(Cli, GenWritesValidMatrix) {
  ASSERT_EQ(run("gen --n 8 --dist poisson1 --seed 3 --out " + path("c.mat")), 0) << err_;
  const auto m = read_matrix_file(path("c.mat")).matrix;
  EXPECT_EQ(m.size(), 8u);
  ASSERT_EQ(run("gen --n 8 --dist poisson1 --seed 3 --out " + path("d.mat")), 0);
  EXPECT_EQ(slurp(path("c.mat")), slurp(path("d.mat")));
}

TEST_F(Cli, GenOddNIsUsageError) {
  EXPECT_EQ(run("gen --n 5 --out " + path("c.mat")), 2);
  EXPECT_NE(err_.find("even"), std::string::npos) << err_;
  EXPECT_FALSE(fs::exists(path("c.mat")));
}

TEST_F(Cli, UnknownDistributionIsUsageError) {
  EXPECT_EQ(run("gen --n 6 --dist cauchy --out " + path("c.mat")), 2);
}

TEST_F(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(run(""), 2); }

TEST_F(Cli, TransformReportsVariances) {
  ASSERT_EQ(run("gen --n 10 --seed 1 --out " + path("c.mat")), 0);
  ASSERT_EQ(run("transform --in " + path("c.mat") + " --mode varopt --out " + path("v.mat")), 0) << err_;
  EXPECT_NE(out_.find("before"), std::string::npos);
  EXPECT_NE(out_.find("after"), std::string::npos);
  EXPECT_EQ(read_matrix_file(path("v.mat")).matrix.size(), 10u);
  ASSERT_EQ(run("transform --in " + path("c.mat") + " --mode observe --out " + path("o.mat")), 0);
  const auto o = read_matrix_file(path("o.mat")).matrix;
  for (std::size_t j = 1; j < 10; ++j) EXPECT_EQ(o(0, j), 0.0);
}

TEST_F(Cli, TransformVaroptFixedPointAndComposition) {
  write("k.mat", "n=4\n0,0.5,0.5,0.5\n0.5,0,0.5,0.5\n0.5,0.5,0,0.5\n0.5,0.5,0.5,0\n");
  ASSERT_EQ(run("transform --in " + path("k.mat") + " --mode varopt --out " + path("kv.mat")), 0) << err_;
  EXPECT_LE(max_abs_diff(read_matrix_file(path("kv.mat")).matrix, read_matrix_file(path("k.mat")).matrix), 1e-12);

  ASSERT_EQ(run("gen --n 12 --dist poisson1 --seed 4 --out " + path("c.mat")), 0);
  ASSERT_EQ(run("transform --in " + path("c.mat") + " --mode observe --out " + path("o.mat")), 0);
  ASSERT_EQ(run("transform --in " + path("o.mat") + " --mode varopt --out " + path("ov.mat")), 0);
  ASSERT_EQ(run("transform --in " + path("c.mat") + " --mode varopt --out " + path("v.mat")), 0);
  EXPECT_LE(max_abs_diff(read_matrix_file(path("ov.mat")).matrix, read_matrix_file(path("v.mat")).matrix), 1e-9);
}

TEST_F(Cli, PairConstantMatrix) {
  write("k.mat", "n=6\n0,2,2,2,2,2\n2,0,2,2,2,2\n2,2,0,2,2,2\n2,2,2,0,2,2\n2,2,2,2,0,2\n2,2,2,2,2,0\n");
  ASSERT_EQ(run("pair --in " + path("k.mat") + " --out " + path("p.txt")), 0) << err_;
  EXPECT_NE(out_.find("total: 6\n"), std::string::npos) << out_;
  EXPECT_EQ(read_pairing_file(path("p.txt")).size(), 6u);
}

TEST_F(Cli, PairMissingInputIsIoError) {
  EXPECT_EQ(run("pair --in " + path("absent.mat") + " --out " + path("p.txt")), 3);
}

TEST_F(Cli, TransformBadMode) {
  write("c.mat", kFiveSeven);
  EXPECT_EQ(run("transform --in " + path("c.mat") + " --mode other --out " + path("o.mat")), 2);
}

TEST_F(Cli, MissingInputIsIoError) {
  EXPECT_EQ(run("transform --in " + path("absent.mat") + " --mode observe --out " + path("o.mat")), 3);
  EXPECT_EQ(run("exact --in " + path("absent.mat")), 3);
}

TEST_F(Cli, InvalidMatrixIsValidationError) {
  write("asym.mat", "n=4\n0,1,0,0\n2,0,0,0\n0,0,0,0\n0,0,0,0\n");
  EXPECT_EQ(run("pair --in " + path("asym.mat") + " --out " + path("p.txt")), 4);
  write("diag.mat", "n=4\n1,0,0,0\n0,0,0,0\n0,0,0,0\n0,0,0,0\n");
  EXPECT_EQ(run("exact --in " + path("diag.mat")), 4);
}

TEST_F(Cli, PairFiveSeven) {
  write("c.mat", kFiveSeven);
  ASSERT_EQ(run("pair --in " + path("c.mat") + " --out " + path("p.txt") + " --ground-truth " + path("c.mat")),
            0)
      << err_;
  EXPECT_EQ(slurp(path("p.txt")), "1-2\n3-4\n");
  EXPECT_NE(out_.find("total: 12"), std::string::npos) << out_;
  EXPECT_NE(out_.find("performance: 6"), std::string::npos) << out_;
}

TEST_F(Cli, PairGroundTruthSizeMismatch) {
  write("c.mat", kFiveSeven);
  ASSERT_EQ(run("gen --n 6 --out " + path("g.mat")), 0);
  EXPECT_EQ(run("pair --in " + path("c.mat") + " --out " + path("p.txt") + " --ground-truth " + path("g.mat")), 4);
}

TEST_F(Cli, ExactFiveSeven) {
  write("c.mat", kFiveSeven);
  ASSERT_EQ(run("exact --in " + path("c.mat")), 0) << err_;
  EXPECT_NE(out_.find("1-2 3-4"), std::string::npos) << out_;
  EXPECT_NE(out_.find("total: 12"), std::string::npos);
  EXPECT_NE(out_.find("pairing_count: 3"), std::string::npos);
}

TEST_F(Cli, ExactTooLargeIsUsageError) {
  ASSERT_EQ(run("gen --n 16 --out " + path("c.mat")), 0);
  EXPECT_EQ(run("exact --in " + path("c.mat")), 2);
}

TEST_F(Cli, ReconstructWritesLog) {
  ASSERT_EQ(run("gen --n 6 --seed 2 --out " + path("c.mat")), 0);
  ASSERT_EQ(run("reconstruct --in " + path("c.mat") + " --out " + path("e.mat") + " --log " + path("q.csv")), 0)
      << err_;
  EXPECT_NE(out_.find("queries: 10"), std::string::npos) << out_;
  EXPECT_NE(out_.find("equivalent to input: yes"), std::string::npos);
  const std::string log = slurp(path("q.csv"));
  EXPECT_EQ(log.substr(0, log.find('\n')), "query_index,pairing,total");
}

TEST_F(Cli, ExperimentIsReproducible) {
  const std::string common = " --n 8 12 --trials 3 --dist uniform01 poisson1 --seed 5 --jobs 2";
  ASSERT_EQ(run("experiment" + common + " --out " + path("a.csv")), 0) << err_;
  ASSERT_EQ(run("experiment" + common + " --out " + path("b.csv") + " --summary " + path("bs.csv")), 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a_summary.csv")), slurp(path("bs.csv")));
  // header + 2 n * 2 dists * 3 trials * 3 flows
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 36);
}

TEST_F(Cli, ExperimentDefaultConfigRowCount) {
  ASSERT_EQ(run("experiment --out " + path("r.csv")), 0) << err_;
  const std::string r = slurp(path("r.csv"));
  // header + 4 n values * 100 trials * 3 flows
  EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), 1 + 1200);
  EXPECT_TRUE(fs::exists(path("r_summary.csv")));
}

TEST_F(Cli, ExperimentJsonConfigAndOverrides) {
  write("cfg.json",
        R"({"n_values": [6], "trials": 2, "distribution": "gaussian", "flows": ["i", "iii"],)"
        R"( "exchange_limit": 50, "master_seed": 9, "output_path": ")" +
            path("r.csv") + "\"}");
  ASSERT_EQ(run("experiment --config " + path("cfg.json")), 0) << err_;
  std::string r = slurp(path("r.csv"));
  EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), 1 + 4);
  EXPECT_NE(r.find(",gaussian,"), std::string::npos);
  ASSERT_EQ(run("experiment --config " + path("cfg.json") + " --trials 3"), 0);
  r = slurp(path("r.csv"));
  EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), 1 + 6);
}

TEST_F(Cli, ExperimentBadConfig) {
  write("bad.json", R"({"n_values": [7]})");
  EXPECT_EQ(run("experiment --config " + path("bad.json") + " --out " + path("r.csv")), 2);
  write("typo.json", R"({"trails": 3})");
  EXPECT_EQ(run("experiment --config " + path("typo.json") + " --out " + path("r.csv")), 2);
  write("broken.json", "{");
  EXPECT_EQ(run("experiment --config " + path("broken.json") + " --out " + path("r.csv")), 2);
  EXPECT_EQ(run("experiment --config " + path("none.json")), 3);
}

}  // namespace
}  // namespace pairopt
