#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sublin_cli/cli.hpp"

namespace sublin::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CliRun {
  int code;
  Json json;
  std::string raw;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sublin");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  CliRun r{code, Json(), out.str(), err.str()};
  r.json = Json::parse(r.raw);
  return r;
}

std::string strip_timestamp(Json j) {
  j.erase("timestamp");
  return j.dump();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sublin-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveLsWithOracle) {
  const auto tri = write("tri.cnf", "p cnf 2 3\n1 2 0\n-1 0\n2 0\n");
  const CliRun r = run_cli({"solve", "--alg", "ls", "--oracle", tri});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json["schema_version"], 1);
  EXPECT_EQ(r.json["satisfied"], 3);
  EXPECT_EQ(r.json["oracle"]["opt"], 3);
  EXPECT_EQ(r.json["oracle"]["ratio"], 1.0);
  EXPECT_EQ(r.json["assignment"], Json::parse("[-1, 2]"));
  EXPECT_TRUE(r.json["space"].contains("peak_aux_cells"));
  EXPECT_GE(r.json["space"]["passes"]["two-sat"].get<int>(), 1);
  EXPECT_TRUE(r.json.contains("timestamp"));
}

TEST_F(CliTest, SolveHalfPair) {
  const auto pair = write("pair.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  const CliRun r = run_cli({"solve", "--alg", "half", pair});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json["satisfied"], 1);
  EXPECT_FALSE(r.json.contains("oracle"));
}

TEST_F(CliTest, EveryAlgorithmRuns) {
  const auto tri = write("tri.cnf", "p cnf 2 3\n1 2 0\n-1 0\n2 0\n");
  for (const char* alg : {"half", "ls", "chou", "planar-ptas", "exact"}) {
    const CliRun r = run_cli({"solve", "--alg", alg, tri});
    EXPECT_EQ(r.code, 0) << alg << ": " << r.err;
    EXPECT_EQ(r.json["algorithm"], alg);
  }
  EXPECT_EQ(run_cli({"solve", "--alg", "planar-ptas", "--eps", "0.25", tri}).json["extras"]["k"], 8);
  EXPECT_EQ(run_cli({"solve", "--alg", "planar-ptas", "--eps", "1/3", tri}).json["extras"]["k"], 6);
}

TEST_F(CliTest, PartitionChainWritesParts) {
  const auto chain = (dir_ / "chain8.cnf").string();
  ASSERT_EQ(run_cli({"gen-planar", "--kind", "chain", "--size", "8", "--seed", "1", "--out", chain}).code, 0);
  const auto out_dir = (dir_ / "parts").string();
  const CliRun r = run_cli({"partition", "--k", "3", "--out-dir", out_dir, chain});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.json["report"]["disjoint"].get<bool>());
  EXPECT_TRUE(r.json["report"]["ok"].get<bool>());
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(out_dir)) files += e.path().extension() == ".cnf";
  EXPECT_EQ(files, r.json["parts"].size());
}

TEST_F(CliTest, BiasAndHashfamAndOracle) {
  const auto tri = write("tri.cnf", "p cnf 2 3\n1 2 0\n-1 0\n2 0\n");
  const CliRun b = run_cli({"bias", tri});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(b.json["b_f"]["decimal"], "1");
  EXPECT_EQ(b.json["per_var"][0]["decimal"], "-0.25");

  const CliRun h = run_cli({"hashfam", "--n", "3", "--k", "2", "--a", "1", "--b", "2", "--q", "5"});
  ASSERT_EQ(h.code, 0);
  EXPECT_EQ(h.json["family_size"], 25);
  EXPECT_EQ(h.json["t"], 3);

  const CliRun o = run_cli({"oracle", tri});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.json["opt"], 3);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  const auto bad = write("bad.cnf", "p cnf 1 1\n1 -1 0\n");
  const CliRun r = run_cli({"solve", "--alg", "ls", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.json["error"]["kind"], "input");
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"solve", "--alg", "nope", bad}).code, 2);
  EXPECT_EQ(run_cli({"solve", (dir_ / "missing.cnf").string()}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  const auto tri = write("tri.cnf", "p cnf 2 3\n1 2 0\n-1 0\n2 0\n");
  EXPECT_EQ(run_cli({"solve", "--alg", "planar-ptas", "--eps", "3/2", tri}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--alg", "planar-ptas", "--eps", "abc", tri}).code, 2);
  EXPECT_EQ(run_cli({"partition", "--k", "1", tri}).code, 2);
}

TEST_F(CliTest, OracleCapWithFlag) {
  std::string text = "p cnf 27 1\n";
  for (int v = 1; v <= 27; ++v) text += std::to_string(v) + " ";
  text += "0\n";
  const auto big = write("big.cnf", text);
  EXPECT_EQ(run_cli({"solve", "--alg", "half", big}).code, 0);
  EXPECT_EQ(run_cli({"solve", "--alg", "half", "--oracle", big}).code, 2);
}

TEST_F(CliTest, Deterministic) {
  const auto grid = (dir_ / "grid.cnf").string();
  ASSERT_EQ(run_cli({"gen-planar", "--kind", "grid", "--size", "4x4", "--seed", "5", "--out", grid}).code, 0);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"solve", "--alg", "chou", grid}, {"solve", "--alg", "planar-ptas", grid},
        {"partition", "--k", "2", grid}, {"bias", grid}}) {
    EXPECT_EQ(strip_timestamp(run_cli(args).json), strip_timestamp(run_cli(args).json));
  }
}

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace sublin::cli
