#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "mcbsg/cli.hpp"

using namespace mcbsg;
namespace fs = std::filesystem;

namespace {

const std::string kData = MCBSG_DATA_DIR;
const std::string kGraph = kData + "/case_study/graph.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mcbsg");
  std::ostringstream out, err;
  const int code = mcbsg::cli::execute_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mcbsg_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json error_of(const Run& r) { return Json::parse(r.out).at("error"); }

}  // namespace

TEST(Cli, Validate) {
  const auto r = invoke({"validate", "--graph", kGraph});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["topological_order"],
            Json::parse(R"(["v1","v2","v3","v4","v5"])"));
}

TEST(Cli, ExitCodeTable) {
  const auto dir = scratch("codes");
  io::write_file((dir / "bad.json").string(), "{\"nodes\": [");
  io::write_file((dir / "cyc.json").string(),
                 R"({"nodes":[{"id":"a","effectiveness":1,"cost":1},{"id":"b","effectiveness":1,"cost":1}],
                     "edges":[{"from":"a","to":"b","weight":1},{"from":"b","to":"a","weight":1}]})");

  struct Case {
    std::vector<std::string> args;
    int code;
    const char* kind;
  };
  const std::vector<Case> cases{
      {{"centrality", "--graph", kGraph}, 0, nullptr},
      {{"allocate", "--graph", kGraph, "--budget", "12", "--mode", "select"}, 0, nullptr},
      {{"path", "--graph", kGraph, "--from", "v1", "--to", "v5", "--tau", "0"}, 0, nullptr},
      {{"path", "--graph", kGraph, "--from", "v5", "--to", "v1"}, 1, "NoFeasiblePath"},
      {{"validate", "--graph", (dir / "cyc.json").string()}, 1, "CycleDetected"},
      {{"validate", "--graph", (dir / "bad.json").string()}, 2, "ParseError"},
      {{"validate", "--graph", (dir / "missing.json").string()}, 2, "IoError"},
      {{"allocate", "--graph", kGraph, "--budget", "-1"}, 2, "InvalidRequest"},
      {{"allocate", "--graph", kGraph, "--budget", "1", "--mode", "greedy"}, 2, "InvalidRequest"},
      {{"path", "--graph", kGraph, "--from", "v1", "--to", "v9"}, 2, "UnknownNode"},
      {{"feedback", "--graph", kGraph, "--metrics", kData + "/case_study/metrics.json", "--eta",
        "0"},
       2, "InvalidConfig"},
      {{"train", "--data", kGraph}, 2, "SchemaViolation"},
      {{"frobnicate"}, 2, "Usage"},
      {{"allocate", "--graph", kGraph}, 2, "Usage"},
      {{"train", "--data", "x.csv", "--grid-depth", "9:3"}, 2, "Usage"},
  };
  for (const auto& c : cases) {
    const auto r = invoke(c.args);
    EXPECT_EQ(r.code, c.code) << c.args[0] << " " << r.out;
    if (c.kind) {
      EXPECT_EQ(error_of(r).at("kind"), c.kind) << r.out;
      EXPECT_FALSE(r.err.empty());
    }
  }
}

TEST(Cli, ParseErrorNamesLocation) {
  const auto dir = scratch("parse");
  io::write_file((dir / "bad.json").string(), "{\"nodes\": [}");
  const auto r = invoke({"validate", "--graph", (dir / "bad.json").string()});
  EXPECT_NE(error_of(r).at("message").get<std::string>().find("byte"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("allocate"), std::string::npos);
}

TEST(Cli, CohortTrainPredict) {
  const auto dir = scratch("train");
  const auto csv = (dir / "cohort.csv").string();
  ASSERT_EQ(invoke({"cohort", "gen", "--n", "200", "--seed", "5", "--planted", "--out", csv}).code, 0);
  const auto summary = invoke({"cohort", "summarize", "--data", csv});
  EXPECT_EQ(Json::parse(summary.out)["n"], 200);
  const auto trained = invoke({"train", "--data", csv, "--seed", "5", "--grid-depth", "3:4",
                            "--grid-leaf", "2:3", "--criteria", "gini", "--out",
                            (dir / "model").string()});
  ASSERT_EQ(trained.code, 0) << trained.out;
  EXPECT_EQ(Json::parse(trained.out)["configs"], 4);
  EXPECT_TRUE(fs::exists(dir / "model" / "cv_report.csv"));
  const auto predicted = invoke({"predict", "--model", (dir / "model" / "model.json").string(),
                              "--data", csv});
  ASSERT_EQ(predicted.code, 0);
  EXPECT_EQ(Json::parse(predicted.out)["predictions"].size(), 200u);
}

TEST(Cli, RunScenario) {
  const auto dir = scratch("run");
  const auto r = invoke({"run", kData + "/case_study/scenario.json", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto report = Json::parse(r.out);
  for (const char* k : {"validate", "centrality", "allocation", "paths", "feedback", "markov"})
    EXPECT_TRUE(report["stages"].contains(k)) << k;
  const auto& first = report["stages"]["paths"][0]["path"];
  EXPECT_EQ(first["nodes"], Json::parse(R"(["v1","v5"])"));
  EXPECT_EQ(first["cost"], 1.0);
  EXPECT_TRUE(fs::exists(dir / "feedback_history.jsonl"));
}

TEST(Cli, RepeatedInvocationsAreByteIdentical) {
  const auto dir = scratch("det");
  const std::vector<std::vector<std::string>> commands{
      {"cohort", "gen", "--n", "150", "--seed", "3"},
      {"allocate", "--graph", kGraph, "--budget", "7.5", "--mode", "select"},
      {"markov", "--counts", kData + "/case_study/counts.csv", "--steps", "4"},
      {"feedback", "--graph", kGraph, "--metrics", kData + "/case_study/metrics.json", "--iters",
       "6"},
  };
  for (const auto& c : commands) EXPECT_EQ(invoke(c).out, invoke(c).out) << c[0];
}
