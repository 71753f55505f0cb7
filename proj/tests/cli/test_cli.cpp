#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(SWA_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const auto p = dir_ / "scenario.cfg";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("observability"), std::string::npos);
}

TEST_F(Cli, MissingSubcommandIsInvalid) { EXPECT_EQ(run_cli("").code, 2); }

TEST_F(Cli, UnknownFlagIsInvalid) { EXPECT_EQ(run_cli("run --bogus").code, 2); }

TEST_F(Cli, RunWritesArtifacts) {
  const auto cfg = write_config("sim.duration = 15\nsim.dropout_time = 2\n");
  const auto out = dir_ / "run";
  const auto r = run_cli("run --config " + cfg.string() + " --out " + out.string() + " --seed 4");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"log.csv", "metrics.csv", "config.resolved", "schema.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_NE(read_file(out / "config.resolved").find("sim.seed = 4"), std::string::npos);
  const auto schema = nlohmann::json::parse(read_file(out / "schema.json"));
  EXPECT_TRUE(schema.contains("log_csv"));

  // Re-running the resolved config reproduces the log byte for byte.
  const auto again = dir_ / "again";
  ASSERT_EQ(run_cli("run --quiet --config " + (out / "config.resolved").string() + " --out " +
                    again.string())
                .code,
            0);
  EXPECT_EQ(read_file(out / "log.csv"), read_file(again / "log.csv"));

  // metrics recomputed from the log match the run's metrics.
  const auto m = dir_ / "metrics";
  ASSERT_EQ(run_cli("metrics --quiet --config " + (out / "config.resolved").string() + " --log " +
                    (out / "log.csv").string() + " --out " + m.string())
                .code,
            0);
  EXPECT_EQ(read_file(out / "metrics.csv"), read_file(m / "metrics.csv"));
}

TEST_F(Cli, OutDirectoryFromEnvironment) {
  const auto cfg = write_config("sim.duration = 1\n");
  const auto out = dir_ / "env";
  const std::string cmd = "SWA_OUT=" + out.string() + " " + SWA_CLI_PATH + " run --quiet --config " +
                          cfg.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(out / "log.csv"));
}

TEST_F(Cli, InvalidConfigNamesKey) {
  const auto cfg = write_config("sim.n_uavs = 0\n");
  const auto r = run_cli("validate --config " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("sim.n_uavs"), std::string::npos);
  const auto ok = write_config("sim.n_uavs = 5\n");
  EXPECT_EQ(run_cli("validate --config " + ok.string()).code, 0);
}

TEST_F(Cli, MissingConfigFileIsInvalid) {
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.cfg").string()).code, 2);
}

TEST_F(Cli, UnwritableOutputIsInvalid) {
  const auto blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  const auto cfg = write_config("sim.duration = 1\n");
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + (blocker / "sub").string()).code, 2);
}

TEST_F(Cli, SweepLayoutAndSummary) {
  const auto cfg = write_config("sim.duration = 5\nsim.dropout_time = 1\nsim.settle_time = 1\n");
  const auto out = dir_ / "sweep";
  const auto r = run_cli("sweep --quiet --config " + cfg.string() + " --out " + out.string() +
                         " --axis sim.n_uavs=3,4 --seeds 2 --seed 7");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* v : {"3", "4"}) {
    for (const char* s : {"seed_7", "seed_8"}) {
      EXPECT_TRUE(fs::exists(out / (std::string("sim.n_uavs=") + v) / s / "log.csv")) << v << s;
    }
  }
  std::ifstream summary(out / "summary.csv");
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, "axis_value,runs,mean_d_nb,mean_v_drift");
  std::getline(summary, line);
  EXPECT_EQ(line.rfind("3,2,", 0), 0u);
  std::getline(summary, line);
  EXPECT_EQ(line.rfind("4,2,", 0), 0u);

  std::ifstream metrics(out / "metrics.csv");
  int lines = 0;
  while (std::getline(metrics, line)) ++lines;
  EXPECT_EQ(lines, 5);
}

TEST_F(Cli, SweepRejectsBadAxisBeforeRunning) {
  const auto out = dir_ / "bad";
  auto r = run_cli("sweep --out " + out.string() + " --axis sim.bogus=1,2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("sim.bogus"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
  r = run_cli("sweep --out " + out.string() + " --axis sim.n_uavs=3,0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("sim.n_uavs"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(run_cli("sweep --out " + out.string() + " --axis sim.n_uavs=3 --seeds 0").code, 2);
  EXPECT_EQ(run_cli("sweep --out " + out.string() + " --axis nonsense").code, 2);
}

TEST_F(Cli, ObservabilityTable) {
  const auto r = run_cli("observability --n-range 2..6");
  ASSERT_EQ(r.code, 0) << r.output;
  std::istringstream in(r.output);
  std::string line;
  std::getline(in, line);
  for (int n = 2; n <= 6; ++n) {
    ASSERT_TRUE(std::getline(in, line));
    std::istringstream row(line);
    int rn, dim, rank, nullity;
    std::string spans;
    row >> rn >> dim >> rank >> nullity >> spans;
    EXPECT_EQ(rn, n);
    EXPECT_EQ(dim, 4 * n);
    EXPECT_EQ(rank, 4 * n - 4);
    EXPECT_EQ(nullity, 4);
    EXPECT_EQ(spans, "spans");
  }
  EXPECT_EQ(run_cli("observability --n-range 1..3").code, 2);
  EXPECT_EQ(run_cli("observability --n-range x").code, 2);
}

TEST_F(Cli, AneesWritesCsv) {
  const auto out = dir_ / "anees";
  const auto r = run_cli("anees --runs 12 --duration 30 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("bounds ["), std::string::npos);
  std::ifstream in(out / "anees.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,anees_pos,anees_vel,r1,r2");
}
