#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cpbandit/cli.hpp"

using namespace cpbandit::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
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
           ("cpbandit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

const char* kSmallSweep = R"([environment]
mu1 = 0
mu2 = 2
x_star = 0.42
sigma = 1
noise = gaussian

[sweep]
eta = 0.05
budgets = 200, 400
replications = 60
seed = 11

[policy.sh]
[policy.shb]
[policy.sha]
[policy.grid_ls]
)";

}  // namespace

TEST_F(CliTest, RunZeroNoiseExample) {
  const auto r = cli({"run", "--policy", "sh", "--mu1", "0", "--mu2", "2", "--xstar", "0.3", "--sigma",
                      "0", "--eta", "0.1", "--T", "30", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["estimate"].get<double>(), 0.3125);
  EXPECT_NEAR(j["abs_error"].get<double>(), 0.0125, 1e-15);
  EXPECT_FALSE(j["failure"].get<bool>());
  EXPECT_EQ(j["pulls_used"].get<int>(), 27);  // 3 phases x 3 slots x floor(30/9)
  EXPECT_EQ(j["trace"], nlohmann::json({"zoom_left", "zoom_right", "zoom_left"}));
  EXPECT_EQ(j["trace_summary"]["phases"].get<int>(), 3);
}

TEST_F(CliTest, RunMissingEtaNamesField) {
  const auto r = cli({"run", "--policy", "sh", "--mu1", "0", "--mu2", "2", "--xstar", "0.3", "--sigma",
                      "1", "--T", "30"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("eta"), std::string::npos);
}

TEST_F(CliTest, RunBudgetTooSmallIsPolicyError) {
  const auto r = cli({"run", "--policy", "sh", "--mu1", "0", "--mu2", "2", "--xstar", "0.3", "--sigma",
                      "1", "--eta", "0.1", "--T", "8"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("BudgetTooSmall"), std::string::npos);
}

TEST_F(CliTest, RunShaReportsDispatchAndWritesTrace) {
  const fs::path trace = dir_ / "trace.jsonl";
  const auto r = cli({"run", "--policy", "sha", "--mu1", "0", "--mu2", "2", "--xstar", "0.6", "--sigma",
                      "1", "--eta", "0.1", "--T", "2000", "--trace", trace.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("dispatch"));
  EXPECT_LE(j["pulls_used"].get<int>(), 2000);
  EXPECT_GT(j["pulls_used"].get<int>(), 100);
  std::istringstream lines(slurp(trace));
  int count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    EXPECT_TRUE(nlohmann::json::accept(line)) << line;
  }
  EXPECT_EQ(count, j["trace_summary"]["phases"].get<int>());
}

TEST_F(CliTest, RunOddExplorationIsPolicyError) {
  const auto r = cli({"run", "--policy", "sha", "--mu1", "0", "--mu2", "2", "--xstar", "0.6", "--sigma",
                      "1", "--eta", "0.1", "--T", "2000", "--L", "7"});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, RunFlagBeatsConfigFile) {
  const fs::path cfg = write("run.cfg", R"([environment]
mu1 = 0
mu2 = 2
x_star = 0.9
sigma = 0
noise = none
[sweep]
eta = 0.1
[run]
policy = sh
T = 30
)");
  const auto from_file = cli({"run", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NEAR(nlohmann::json::parse(from_file.out)["x_star"].get<double>(), 0.9, 0);
  const auto overridden = cli({"run", "--config", cfg.string(), "--xstar", "0.3"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  const auto j = nlohmann::json::parse(overridden.out);
  EXPECT_EQ(j["x_star"].get<double>(), 0.3);
  EXPECT_DOUBLE_EQ(j["estimate"].get<double>(), 0.3125);
}

TEST_F(CliTest, SweepWritesCsvAndIsDeterministic) {
  const fs::path cfg = write("s.cfg", kSmallSweep);
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv", c = dir_ / "c.csv";
  const auto r1 = cli({"sweep", "--config", cfg.string(), "-o", a.string()});
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_EQ(r1.out, "wrote 8 rows to " + a.string() + "\n");
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "-o", b.string()}).code, 0);
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "-o", c.string(), "--workers", "8"}).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text, slurp(c));
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "policy,T,replications,failures,p_hat,ci_halfwidth,mean_abs_error,dispatch_shb_rate,valid");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
}

TEST_F(CliTest, SweepFlagBeatsConfigFile) {
  const fs::path cfg = write("s.cfg", kSmallSweep);
  const auto r = cli({"sweep", "--config", cfg.string(), "--budgets", "300", "--replications", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",300,5,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, SweepSeedChangesOutput) {
  const fs::path cfg = write("s.cfg", kSmallSweep);
  const auto a = cli({"sweep", "--config", cfg.string()});
  const auto b = cli({"sweep", "--config", cfg.string(), "--seed", "12"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.out, b.out);
}

TEST_F(CliTest, SweepErrors) {
  const fs::path cfg = write("s.cfg", kSmallSweep);
  EXPECT_EQ(cli({"sweep", "--config", cfg.string(), "--budgets", ""}).code, 2);
  EXPECT_EQ(cli({"sweep", "--config", (dir_ / "missing.cfg").string()}).code, 4);
  EXPECT_EQ(cli({"sweep", "--config", cfg.string(), "-o", (dir_ / "no/such/dir/x.csv").string()}).code,
            4);
  const fs::path broken = write("broken.cfg", "[environment\nmu1 = 0\n");
  EXPECT_EQ(cli({"sweep", "--config", broken.string()}).code, 2);
  EXPECT_EQ(cli({"sweep"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, SweepInvalidCellStillWritesRow) {
  const fs::path cfg = write("s.cfg", kSmallSweep);
  const auto r = cli({"sweep", "--config", cfg.string(), "--budgets", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sh,5,60,0,nan,nan,nan,,false"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("invalid cell"), std::string::npos);
}

TEST_F(CliTest, BoundsTable) {
  const auto r = cli({"bounds", "--delta", "2", "--sigma", "8", "--eta", "1e-8", "--T", "200,429"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row1, row2, extra;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(header,
            "T,t1,shb_upper,sh_upper,large_lower,small_lower,shb_valid,sh_valid,large_valid,small_valid");
  EXPECT_EQ(row1.rfind("200,428.8077441,", 0), 0u) << row1;
  EXPECT_EQ(row2.rfind("429,428.8077441,", 0), 0u) << row2;
  EXPECT_NE(row1.find(",false,true"), std::string::npos);  // small regime only
  EXPECT_NE(row2.find(",true,false"), std::string::npos);  // large regime only
}

TEST_F(CliTest, BoundsSingleRowAndErrors) {
  const auto single = cli({"bounds", "--delta", "2", "--sigma", "1", "--eta", "0.1", "--T", "100"});
  ASSERT_EQ(single.code, 0);
  EXPECT_EQ(std::count(single.out.begin(), single.out.end(), '\n'), 2);
  EXPECT_EQ(cli({"bounds", "--delta", "2", "--sigma", "1", "--eta", "0.6", "--T", "100"}).code, 2);
  EXPECT_EQ(cli({"bounds", "--delta", "2", "--sigma", "1", "--eta", "0.1"}).code, 2);
  EXPECT_EQ(cli({"bounds", "--delta", "0", "--sigma", "1", "--eta", "0.1", "--T", "5"}).code, 2);
  const auto grid = cli({"bounds", "--delta", "2", "--sigma", "1", "--eta", "0.1", "--T-from", "10",
                         "--T-to", "50", "--T-step", "10", "--sha-B", "0.05", "--sha-c1", "0.01",
                         "--sha-c2", "0.01", "--sha-c3", "1"});
  ASSERT_EQ(grid.code, 0) << grid.err;
  EXPECT_EQ(std::count(grid.out.begin(), grid.out.end(), '\n'), 6);
  EXPECT_NE(grid.out.find("sha_upper,sha_valid"), std::string::npos);
}

TEST_F(CliTest, ReproZeroNoiseSuite) {
  const fs::path out = dir_ / "out";
  const auto r = cli({"repro", "zero-noise-suite", out.string(), "--replications", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    ++files;
    const std::string text = slurp(entry.path());
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13) << entry.path();
    EXPECT_EQ(text.find(",false"), std::string::npos) << text;
  }
  EXPECT_EQ(files, 5);
  EXPECT_TRUE(fs::exists(out / "zero-noise-suite_xstar0.01.csv"));
}

TEST_F(CliTest, ReproErrors) {
  EXPECT_EQ(cli({"repro", "fig9", (dir_ / "o").string()}).code, 2);
  const fs::path blocker = write("file", "x");
  EXPECT_EQ(cli({"repro", "zero-noise-suite", (blocker / "sub").string()}).code, 4);
}
