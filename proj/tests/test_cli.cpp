#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "latmc/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  std::vector<json> lines() const {
    std::vector<json> r;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) r.push_back(json::parse(line));
    return r;
  }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = latmc::cli::run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string sample(const char* name) { return std::string(LATMC_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, CheckFml) {
  const Outcome r = run({"check", "--model", sample("modelA.json"), "--formula", "mu u. p \\/ <> u"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.lines().at(0), json::parse(R"({"s0": "⊤", "s1": "⊤"})"));
}

TEST(Cli, CheckCtlMaximal) {
  const Outcome r = run({"check", "--model", sample("modelA.json"), "--formula", "A(tt U p)", "--logic", "ctl", "--exec", "max"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.lines().at(0), json::parse(R"({"s0": "⊥", "s1": "⊤"})"));
}

TEST(Cli, CheckWithEnvironment) {
  const Outcome r = run({"check", "--model", sample("modelA.json"), "--formula", "<> u", "--env", R"({"u": {"s0": "⊤", "s1": "⊥"}})"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.lines().at(0), json::parse(R"({"s0": "⊤", "s1": "⊥"})"));
}

TEST(Cli, Encode) {
  const Outcome r = run({"encode", "--formula", "A(p W q)"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "nu u. p /\\ (q \\/ [] u)\n");
}

TEST(Cli, UsageAndValidationErrors) {
  EXPECT_EQ(run({"check", "--model", sample("modelA.json"), "--formula", "p /\\"}).code, 2);
  const Outcome missing = run({"check", "--model", sample("nope.json"), "--formula", "p"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_FALSE(missing.err.empty());
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const Outcome star = run({"check", "--model", sample("modelA.json"), "--formula", "E(X (p U p))", "--logic", "ctl"});
  EXPECT_EQ(star.code, 2);
  EXPECT_EQ(json::parse(star.err)["error"], "NotCtlFragment");
}

TEST(Cli, Equiv) {
  const Outcome ok = run({"equiv", "--dir", LATMC_SAMPLES_DIR, "--formulas", sample("formulas.txt")});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const json summary = ok.lines().back();
  EXPECT_EQ(summary["pass"], true);
  EXPECT_GT(summary["checked"].get<int>(), 0);
  const Outcome bad = run({"equiv", "--dir", LATMC_SAMPLES_DIR, "--formulas", sample("formulas.txt"), "--inject-fault"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.lines().back()["pass"], false);
}

TEST(Cli, ExecMap) {
  const Outcome r = run({"exec-map", "--model", sample("modelA.json"), "--polarity", "max", "--query", "E(tt U p)@s0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.lines().at(0)["value"], "⊤");
}

TEST(Cli, Charfix) {
  const Outcome r = run({"charfix", "--model", sample("weighted_chain3.json"), "--formula", "E(q U p)", "--exec", "max"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, Laws) {
  const Outcome r = run({"laws", "--morphism", "beta", "--lattice", "chain3"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.lines().at(0)["pass"], true);
}

TEST(Cli, Oracle) {
  const Outcome r = run({"oracle", "--suite", "extrema"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.lines().at(0)["pass"], true);
}

TEST(Cli, Lint) {
  const Outcome r = run({"lint", sample("neighborhood.json"), sample("traffic.json")});
  ASSERT_EQ(r.code, 0);
  const auto lines = r.lines();
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_FALSE(lines[0]["notes"].empty());
  EXPECT_EQ(lines[1]["kind"], "nonempty_powerset");
}

TEST(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(LATMC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int s = std::system(cmd.c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("encode --formula 'EX p'"), 0);
  EXPECT_EQ(status("encode --formula 'EX'"), 2);
}
