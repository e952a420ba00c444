#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
  const std::string cmd = std::string(DISPERSE1D_CLI) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("disperse1d_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path &dir, const std::string &body) {
  const auto p = dir / "config.in.json";
  std::ofstream(p) << body;
  return p;
}

nlohmann::json read_json(const fs::path &p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

} // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("bogus"), 2);
  const auto d = scratch("usage");
  EXPECT_EQ(run("scatter --config " + (d / "missing.json").string()), 2);
  const auto bad = write_config(d, R"({"schema_version": 1, "potential": {"a": 1}})");
  EXPECT_EQ(run("scatter --config " + bad.string() + " --out " + d.string()), 2);
  const auto ok = write_config(d, R"({"schema_version": 1, "potential": {"family": "sech2", "a": 1}})");
  EXPECT_EQ(run("scatter --config " + ok.string() + " --sigma 2 --out " + d.string()), 2);
  EXPECT_EQ(run("scatter --config " + ok.string() + " --tladder 10:1000 --out " + d.string()), 2);
  EXPECT_EQ(run("scatter --config " + ok.string() + " --routes fresnel,nope --out " + d.string()), 2);
  const std::string env = "env DISPERSE1D_THREADS=zero ";
  const int st = std::system((env + DISPERSE1D_CLI + " scatter --config " + ok.string() + " --out " +
                              d.string() + " > /dev/null 2>&1")
                                 .c_str());
  EXPECT_EQ(WEXITSTATUS(st), 2);
}

TEST(Cli, ScatterWritesArtifacts) {
  const auto d = scratch("scatter");
  const auto cfg =
      write_config(d, R"({"schema_version": 1, "potential": {"family": "sech2", "a": 1}})");
  ASSERT_EQ(run("scatter --config " + cfg.string() + " --out " + (d / "out").string()), 0);
  for (const char *f : {"scattering.csv", "bound_states.csv", "resonance.json", "config.json"})
    EXPECT_TRUE(fs::exists(d / "out" / f)) << f;
  const auto r = read_json(d / "out" / "resonance.json");
  EXPECT_EQ(r["resonance_class"], "ResonantB");
  ASSERT_EQ(r["kappa"].size(), 1u);
  EXPECT_NEAR(r["kappa"][0].get<double>(), 1.0, 1e-6);
}

TEST(Cli, AppendixRuns) {
  const auto d = scratch("appendix");
  ASSERT_EQ(run("appendix --out " + d.string()), 0);
  EXPECT_TRUE(fs::exists(d / "appendix.csv"));
  EXPECT_TRUE(fs::exists(d / "appendix.json"));
}
