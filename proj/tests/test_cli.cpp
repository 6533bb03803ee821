#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "riskdispatch_cli";

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + DISPATCH_EXE + "\" " + args + " >" + (kWork / "stdout.txt").string() +
                          " 2>" + (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = kWork / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string ieee30() { return (testing_support::data_dir() / "ieee30.toml").string(); }

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_F(Cli, SolveWritesSolution) {
  const auto out = (kWork / "sol.json").string();
  ASSERT_EQ(run("solve --case " + ieee30() + " --scenario high-wind --alpha 0.05 --samples 500 --seed 3 --out " + out),
            0)
      << read(kWork / "stderr.txt");
  const auto json = read(out);
  EXPECT_NE(json.find("\"lmp\""), std::string::npos);
  EXPECT_NE(json.find("\"w\""), std::string::npos);
}

TEST_F(Cli, SolveThenValidate) {
  const auto sol = (kWork / "sol2.json").string();
  const auto model = (kWork / "model.json").string();
  ASSERT_EQ(run("solve --case " + ieee30() + " --scenario low-wind --alpha 0.1 --samples 300 --out " + sol +
                " --model-out " + model),
            0)
      << read(kWork / "stderr.txt");
  ASSERT_EQ(run("validate --solution " + sol + " --model " + model + " --trials 2000"), 0)
      << read(kWork / "stderr.txt");
  const auto report = read(kWork / "stdout.txt");
  EXPECT_NE(report.find("\"empirical_risk\""), std::string::npos);
  EXPECT_NE(report.find("\"alpha_target\": 0.1"), std::string::npos);
}

TEST_F(Cli, ExplicitScenarioVector) {
  EXPECT_EQ(run("solve --case " + ieee30() + " --scenario 1,1,1,1,1,1,1 --alpha 0.05 --samples 200"), 0)
      << read(kWork / "stderr.txt");
  EXPECT_EQ(run("solve --case " + ieee30() + " --scenario 1,1 --alpha 0.05 --samples 200"), 3);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("solve --case " + ieee30() + " --scenario high-wind --alpha 1.5"), 3);
  EXPECT_EQ(run("solve --case /nonexistent.toml --scenario high-wind --alpha 0.05"), 3);
  EXPECT_EQ(run("solve --case " + ieee30() + " --scenario no-such-tag --alpha 0.05"), 3);
  EXPECT_EQ(run("bogus-command"), 3);
  const auto bad = write("bad.toml", "base_mva = 100\n[[bus]]\nid = 1\nload_mw = = 3\n");
  EXPECT_EQ(run("solve --case " + bad + " --scenario 1 --alpha 0.05"), 3);
  EXPECT_NE(read(kWork / "stderr.txt").find("line 4"), std::string::npos);
  EXPECT_EQ(run("solve --case " + ieee30() + " --scenario high-wind --alpha 0.05 --samples 200 --beta 2.0"), 2);
  EXPECT_NE(read(kWork / "stderr.txt").find("inadequate supply"), std::string::npos);
}

TEST_F(Cli, GenTrace) {
  const auto out = (kWork / "trace.csv").string();
  ASSERT_EQ(run("gen-trace --hours 48 --farms 3 --seed 5 --out " + out), 0);
  const auto text = read(out);
  EXPECT_EQ(text.rfind("timestamp,farm1,farm2,farm3\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 49);
  ASSERT_EQ(run("gen-trace --hours 48 --farms 3 --seed 5"), 0);
  EXPECT_EQ(read(kWork / "stdout.txt"), text);
  EXPECT_EQ(run("gen-trace --hours 1 --farms 3 --seed 5"), 3);
}

TEST_F(Cli, SweepConfigErrors) {
  const auto cfg = write("bad_sweep.toml", "case = \"x.toml\"\nfrobnicate = 1\n");
  EXPECT_EQ(run("sweep --config " + cfg), 3);
  EXPECT_NE(read(kWork / "stderr.txt").find("line 2"), std::string::npos);
}
