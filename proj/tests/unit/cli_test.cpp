#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bessbid/error.hpp"
#include "commands.hpp"
#include "output_set.hpp"
#include "run_config.hpp"
#include "test_support.hpp"

namespace bessbid::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "bessbid");
  return run_cli(args);
}

TEST(RunConfig, OverridesUseJsonPointers) {
  auto cfg = make_run_config(nlohmann::json::object(), {"/bess/ilf=0.2", "/synth/zone=SE4", "/seed=7"}, fs::current_path());
  EXPECT_EQ(cfg.bess.ilf, 0.2);
  EXPECT_EQ(cfg.synth.zone, "SE4");
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_THROW(make_run_config(nlohmann::json::object(), {"bess/ilf=0.2"}, fs::current_path()), ConfigError);
  EXPECT_THROW(make_run_config(nlohmann::json::object(), {"/bess/ilf=\"high\""}, fs::current_path()), ConfigError);
  EXPECT_THROW(make_run_config(nlohmann::json::object(), {"/bess/ilf=1.5"}, fs::current_path()), ConfigError);
}

TEST(OutputSet, ManifestHashesEveryFile) {
  const auto dir = testing::scratch_dir("manifest");
  OutputSet out(dir);
  out.write("b/x.txt", "abc");
  out.write("a.txt", "");
  out.write_manifest("test", "{}");
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  ASSERT_EQ(m["files"].size(), 2u);
  EXPECT_EQ(m["files"][0]["path"], "a.txt");
  EXPECT_EQ(m["files"][0]["sha256"], "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(m["files"][1]["sha256"], "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(m["files"][1]["bytes"], 3);
}

TEST(Cli, MissingInputIsDataError) {
  const auto dir = testing::scratch_dir("cli_missing");
  EXPECT_EQ(run({"forecast", "--set", "/data/hourly=[{\"path\":\"nope.csv\",\"zone\":\"SE3\",\"market\":\"SPOT\"}]",
                 "-o", (dir / "out").string()}),
            kExitDataError);
  EXPECT_EQ(run({"optimize", "-o", (dir / "out").string()}), kExitDataError);
}

TEST(Cli, UnknownSubcommandIsUsageError) { EXPECT_EQ(run({"frobnicate"}), kExitDataError); }

TEST(Cli, PipelineIsByteDeterministic) {
  const auto dir = testing::scratch_dir("cli_pipeline");
  ASSERT_EQ(run({"synth", "--set", "/synth/weeks=3", "/synth/hours=4", "-o", (dir / "data").string()}), kExitOk);
  const auto cfg = (dir / "data" / "synth" / "run.json").string();
  for (const std::string cmd : {"forecast", "optimize", "simulate-meb", "export-lp", "ingest"}) {
    ASSERT_EQ(run({cmd, "-c", cfg, "-o", (dir / (cmd + "1")).string()}), kExitOk) << cmd;
    ASSERT_EQ(run({cmd, "-c", cfg, "-o", (dir / (cmd + "2")).string()}), kExitOk) << cmd;
    const auto a = slurp(dir / (cmd + "1") / "manifest.json");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / (cmd + "2") / "manifest.json")) << cmd;
  }
  const auto v = nlohmann::json::parse(slurp(dir / "optimize1" / "optimize" / "validation.json"));
  EXPECT_TRUE(v["ok"].get<bool>());
}

}  // namespace
}  // namespace bessbid::cli
