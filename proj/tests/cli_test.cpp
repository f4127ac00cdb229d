#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("burgulence_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  int run(const std::string& verb, const std::string& config_path, const std::string& out,
          const std::string& extra = "--deterministic") {
    const std::string cmd = std::string(BURGULENCE_CLI) + " " + verb + " --config " + config_path + " --out " +
                            (dir_ / out).string() + " " + extra + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& out, const std::string& file) {
    std::ifstream in(dir_ / out / file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* simulate_cfg = R"({"flux": "quadratic", "nu": 0.05, "t_end": 0.2, "snapshots": {"uniform": 4}})";
const char* sweep_cfg =
    R"({"flux": "quadratic", "nu_list": [0.1, 0.06, 0.035, 0.02], "seeds": [1], "cfl_safety": 1.0)";

}  // namespace

TEST_F(Cli, SimulateWritesFilesWithProvenance) {
  const auto cfg = config("sim.json", simulate_cfg);
  ASSERT_EQ(run("simulate", cfg, "a"), 0);
  for (const char* f : {"stats.csv", "final.csv", "trajectory.bin"}) EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  const auto stats = read("a", "stats.csv");
  EXPECT_EQ(stats.rfind("# burgulence ", 0), 0u);
  EXPECT_NE(stats.find("step,t,dt,energy,enstrophy,maxslope"), std::string::npos);
  EXPECT_EQ(read("a", "final.csv").rfind("# burgulence ", 0), 0u);
}

TEST_F(Cli, RerunIsByteIdentical) {
  const auto cfg = config("sim.json", simulate_cfg);
  ASSERT_EQ(run("simulate", cfg, "a"), 0);
  ASSERT_EQ(run("simulate", cfg, "b"), 0);
  EXPECT_EQ(read("a", "stats.csv"), read("b", "stats.csv"));
  EXPECT_EQ(read("a", "final.csv"), read("b", "final.csv"));
  EXPECT_EQ(read("a", "trajectory.bin"), read("b", "trajectory.bin"));
}

TEST_F(Cli, OversizedStepIsANumericalFailure) {
  const auto cfg = config(
      "blow.json", R"({"flux": "quadratic", "nu": 0.001, "t_end": 2, "cfl_safety": 1000, "snapshots": {"uniform": 1}})");
  EXPECT_EQ(run("simulate", cfg, "a"), 3);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("simulate", config("noflux.json", R"({"nu": 0.01, "t_end": 1})"), "a"), 2);
  EXPECT_EQ(run("simulate", config("bad.json", "{not json"), "a"), 2);
  EXPECT_EQ(run("simulate", (dir_ / "missing.json").string(), "a"), 2);
  EXPECT_EQ(run("simulate",
                config("ranges.json", R"({"flux": "quadratic", "nu": 0.001, "t_end": 1,
                   "ranges": {"K": 2, "C1": 0.0625, "C2": 0.01}})"),
                "a"),
            2);
}

TEST_F(Cli, ReportWithoutSweepExitsTwo) {
  EXPECT_EQ(run("report", config("sw.json", std::string(sweep_cfg) + "}"), "empty"), 2);
  EXPECT_EQ(run("fit", config("sw.json", std::string(sweep_cfg) + "}"), "empty"), 2);
}

TEST_F(Cli, OracleWritesFields) {
  const auto ch = config("ch.json", R"({"flux": "quadratic", "nu": 0.05, "t_end": 0.5,
      "initial_condition": {"type": "sine"}, "oracle": {"kind": "cole-hopf", "times": [0.25, 0.5]}})");
  ASSERT_EQ(run("oracle", ch, "a"), 0);
  EXPECT_NE(read("a", "cole_hopf_001.csv").find("x,u"), std::string::npos);
  const auto lo = config("lo.json", R"({"flux": "quadratic", "nu": 0.05, "t_end": 0.5,
      "initial_condition": {"type": "sine"}, "oracle": {"kind": "lax-oleinik", "times": [0.5], "n_out": 1024}})");
  ASSERT_EQ(run("oracle", lo, "b"), 0);
  EXPECT_NE(read("b", "shocks_000.csv").find("x_shock,u_left,u_right"), std::string::npos);
}

TEST_F(Cli, SweepFitReportChain) {
  const auto strict = config("strict.json", std::string(sweep_cfg) + R"(, "fits": {"norm_tolerance": 1e-9}})");
  const auto loose = config("loose.json", std::string(sweep_cfg) + R"(, "fits": {"norm_tolerance": 100,
      "sp_j2_tolerance": 100, "sp_j1_tolerance": 100, "sp_j1_nu_tolerance": 100, "spectrum_tolerance": 100,
      "flatness_tolerance": 100}})");
  ASSERT_EQ(run("sweep", strict, "s"), 0);
  const auto sweep_bytes = read("s", "sweep.csv");
  EXPECT_EQ(sweep_bytes.rfind("# burgulence ", 0), 0u);
  EXPECT_EQ(run("fit", strict, "s"), 4);
  EXPECT_EQ(run("fit", loose, "s"), 0);
  EXPECT_NE(read("s", "fits.csv").find("quantity,range,slope,stderr,predicted,tolerance,verdict"),
            std::string::npos);
  EXPECT_EQ(run("report", loose, "s"), 0);
  EXPECT_NE(read("s", "report.md").find("<svg"), std::string::npos);
  ASSERT_EQ(run("sweep", strict, "s2", "--deterministic --workers 2"), 0);
  EXPECT_EQ(read("s2", "sweep.csv"), sweep_bytes);
}
