#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kScenarios = CONSENSUS_SCENARIO_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "consensus-delay");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = consensus::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("consensus_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Cli, BoundsTriangle) {
  const fs::path dir = scratch("bounds");
  const Result r = run({"--scenario", kScenarios + "/triangle_tau051.json", "--out", dir.string(), "--zero-class", "2",
                        "bounds"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stable for tau_bar < 0.523598775598"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("<="), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "margins.json"));
  EXPECT_NEAR(j.at("constant_uniform").get<double>(), 0.5236, 1e-4);
  EXPECT_EQ(j.at("norm_mode"), "spectral_radius");
  EXPECT_EQ(j.at("decay_margins").size(), 11u);
  EXPECT_EQ(j.at("delay_independent").at("2"), "Fails");
}

TEST(Cli, BoundsCompleteFamily) {
  const Result r = run({"--family", "complete", "--n", "10", "--delta", "1", "bounds"});
  ASSERT_EQ(r.code, 0) << r.err;
  // pi / 20
  EXPECT_NE(r.out.find("stable for tau_bar < 0.157079632679"), std::string::npos) << r.out;
}

TEST(Cli, TwoNormMode) {
  const fs::path dir = scratch("twonorm");
  const Result r = run({"--family", "loop", "--n", "6", "--norm-mode", "two-norm", "--out", dir.string(), "bounds"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "margins.json")).at("norm_mode"), "operator_two_norm");
}

TEST(Cli, BoundsDisconnected) {
  const Result r = run({"--scenario", kScenarios + "/disconnected.json", "bounds"});
  EXPECT_EQ(r.code, consensus::cli::kDisconnected);
  EXPECT_EQ(r.err.rfind("error: 2 GraphDisconnected", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("connected"), std::string::npos);
}

TEST(Cli, SimulateWritesCsvAndVerdict) {
  const fs::path dir = scratch("simulate");
  const Result r = run({"--scenario", kScenarios + "/triangle_nonuniform.json", "--out", dir.string(), "simulate"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("classification: Converged"), std::string::npos) << r.out;
  const auto v = nlohmann::json::parse(slurp(dir / "verdict.json"));
  EXPECT_EQ(v.at("classification"), "Converged");
  EXPECT_LT(v.at("average_drift").get<double>(), 1e-6);
  const std::string csv = slurp(dir / "trajectory.csv");
  EXPECT_EQ(csv.rfind("t,agent,dim,value,disagreement\n0,1,1,2,", 0), 0u);
}

TEST(Cli, SimulateIsDeterministic) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  ASSERT_EQ(run({"--scenario", kScenarios + "/star_delay_independent.json", "--out", a.string(), "simulate"}).code, 0);
  ASSERT_EQ(run({"--scenario", kScenarios + "/star_delay_independent.json", "--out", b.string(), "simulate"}).code, 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "verdict.json"), slurp(b / "verdict.json"));
}

TEST(Cli, SimulateStepTooLarge) {
  const Result r = run({"--scenario", kScenarios + "/triangle_tau051.json", "simulate", "--h-step", "0.2"});
  EXPECT_EQ(r.code, consensus::cli::kStepTooLarge);
  EXPECT_EQ(r.err.rfind("error: 3 StepTooLarge", 0), 0u) << r.err;
}

TEST(Cli, SimulateNeedsDelays) {
  const Result r = run({"--scenario", kScenarios + "/disconnected.json", "simulate"});
  EXPECT_EQ(r.code, consensus::cli::kFailure);
}

TEST(Cli, SweepTriangleBracketsMargin) {
  const fs::path dir = scratch("sweep");
  const Result r = run({"--scenario", kScenarios + "/triangle_sweep.json", "--out", dir.string(), "sweep"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("empirical critical delay: ");
  ASSERT_NE(pos, std::string::npos) << r.out;
  const double estimate = std::stod(r.out.substr(pos + 26));
  EXPECT_NEAR(estimate, 0.5236, 0.01);
  const std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(csv.rfind("tau,verdict,final_disagreement\n0.3,", 0), 0u) << csv;
}

TEST(Cli, SweepLoopSix) {
  const Result r = run({"--family", "loop", "--n", "6", "sweep", "--tau-min", "0.2", "--tau-max", "0.6", "--steps", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("empirical critical delay: ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(pos + 26)), std::acos(-1.0) / 8, 0.01);
}

TEST(Cli, SweepBelowMarginHasNoSignChange) {
  const Result r = run({"--scenario", kScenarios + "/triangle_sweep.json", "sweep", "--tau-min", "0.1", "--tau-max",
                        "0.4", "--steps", "3"});
  EXPECT_EQ(r.code, consensus::cli::kNoSignChange);
  EXPECT_EQ(r.err.rfind("error: 4 NoSignChange", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("raise --tau-max"), std::string::npos);
}

TEST(Cli, CrosscheckFamilies) {
  const Result c = run({"--family", "complete", "crosscheck"});
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("max relative error"), std::string::npos);
  EXPECT_EQ(c.out.find("FAIL"), std::string::npos);
  const Result l = run({"--family", "loop", "--delta", "2", "crosscheck"});
  EXPECT_EQ(l.code, 0) << l.out;
  EXPECT_NE(l.out.find("\n24 "), std::string::npos);
}

TEST(Cli, LoopThreeEqualsCompleteThree) {
  const Result a = run({"--family", "loop", "--n", "3", "bounds"});
  const Result b = run({"--family", "complete", "--n", "3", "bounds"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  auto margins = [](const std::string& s) { return s.substr(0, s.find("closed form")); };
  EXPECT_EQ(margins(a.out), margins(b.out));
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"--norm-mode", "bogus", "bounds"}).code, 0);
  EXPECT_EQ(run({"bounds"}).code, consensus::cli::kFailure);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
