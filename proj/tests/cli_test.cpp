#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" FUZZCTL_CLI_PATH "' " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fuzzctl_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kBundled = std::string(FUZZCTL_DATA_DIR) + "/washing_machine.flc";

}  // namespace

TEST(CliEval, ApexPoint) {
  const auto r = run("eval --set dirtiness=15 --set saturation_time=5");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "wash_time = 7.50 min (medium)");
}

TEST(CliEval, CleanCornerWithExplicitFile) {
  const auto r = run("eval '" + kBundled + "' --set dirtiness=0 --set saturation_time=0");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "wash_time = 1.33 min (very_low)");
}

TEST(CliEval, PaperMode) {
  const auto r = run("eval --mode paper --set dirtiness=7.2 --set saturation_time=2.85");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "wash_time = 4.16 min (low)");
}

TEST(CliEval, UsageErrors) {
  EXPECT_EQ(run("eval --set dirtiness=15").status, 2);
  EXPECT_EQ(run("eval --set dirtiness=15 --set saturation_time=x").status, 2);
  EXPECT_EQ(run("eval --set dirtiness=15 --set saturation_time=5 --set spin=3").status, 2);
  EXPECT_EQ(run("eval --set dirtiness=1 --set dirtiness=2 --set saturation_time=5").status, 2);
  EXPECT_EQ(run("eval --mode fancy --set dirtiness=1 --set saturation_time=5").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
}

TEST(CliEval, MissingFileIsInputFailure) {
  EXPECT_EQ(run("eval /nonexistent/x.flc --set dirtiness=1 --set saturation_time=1").status, 1);
}

TEST(CliSweep, DefaultGrid) {
  const auto r = run("sweep");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 10202u);
  EXPECT_EQ(ls[0], "dirtiness,saturation_time,wash_time");
  EXPECT_EQ(ls[1], "0.000000,0.000000,1.333333");
  EXPECT_EQ(ls[10201], "30.000000,10.000000,13.666667");
  // row-major: dirtiness outer, saturation inner
  EXPECT_EQ(ls[2].substr(0, 18), "0.000000,0.100000,");
  EXPECT_EQ(ls[1 + 50 * 101 + 50], "15.000000,5.000000,7.500000");
}

TEST(CliSweep, TwoByTwoToFile) {
  const auto out = scratch("corners.csv");
  const auto r = run("sweep --grid 2x2 --out '" + out.string() + "'");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(slurp(out));
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[1].substr(0, 17), "0.000000,0.000000");
  EXPECT_EQ(ls[2].substr(0, 18), "0.000000,10.000000");
  EXPECT_EQ(ls[3].substr(0, 18), "30.000000,0.000000");
  EXPECT_EQ(ls[4].substr(0, 19), "30.000000,10.000000");
}

TEST(CliSweep, MatchesEval) {
  const auto r = run("sweep --grid 4x3 --range dirtiness=3:27");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 13u);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    double d, s, w;
    ASSERT_EQ(std::sscanf(ls[i].c_str(), "%lf,%lf,%lf", &d, &s, &w), 3);
    char buf[128];
    std::snprintf(buf, sizeof buf, "eval --set dirtiness=%.6f --set saturation_time=%.6f", d, s);
    const auto e = run(buf);
    double shown;
    ASSERT_EQ(std::sscanf(e.out.c_str(), "wash_time = %lf", &shown), 1);
    EXPECT_NEAR(shown, w, 0.005 + 1e-6);
  }
}

TEST(CliSweep, Errors) {
  EXPECT_EQ(run("sweep --grid 1x5").status, 2);
  EXPECT_EQ(run("sweep --grid banana").status, 2);
  EXPECT_EQ(run("sweep --out /nonexistent/dir/x.csv").status, 1);
}

TEST(CliCheck, BundledIsClean) {
  const auto r = run("check '" + kBundled + "'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "OK: 3 variables, 9 rules, 0 warnings\n");
}

TEST(CliCheck, DeletedRuleWarns) {
  auto text = slurp(kBundled);
  const std::string victim = "RULE IF dirtiness IS high AND saturation_time IS high THEN wash_time IS very_high\n";
  text.erase(text.find(victim), victim.size());
  const auto p = scratch("missing_rule.flc");
  write(p, text);
  const auto r = run("check '" + p.string() + "'");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("warning: uncovered combination high×large"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("OK: 3 variables, 8 rules, 1 warnings"), std::string::npos) << r.out;
}

TEST(CliCheck, MalformedFileReportsLine) {
  auto text = slurp(kBundled);
  text += "RULE IF dirtiness low THEN wash_time IS low\n";
  const auto p = scratch("malformed.flc");
  write(p, text);
  const auto r = run("check '" + p.string() + "'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find(p.string() + ":38: error:"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("FAILED: 1 errors"), std::string::npos) << r.out;
}

TEST(CliExplain, WorkedPoint) {
  const auto r = run("explain --set dirtiness=7.2 --set saturation_time=2.85");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0].rfind("low & medium → low @ 0.52", 0), 0u) << ls[0];
}

TEST(CliExplain, Apex) {
  const auto r = run("explain --set dirtiness=15 --set saturation_time=5");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(ls[0].rfind("medium & medium → medium @ 1.00", 0), 0u) << ls[0];
}

TEST(CliSimulate, DefaultLoad) {
  const auto r = run("simulate --dirt 5 --k 0.7");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "cycle: clean");
  EXPECT_NE(r.out.find("reruns       = 0"), std::string::npos);
}

TEST(CliSimulate, StubbornLoad) {
  const auto r = run("simulate --dirt 30 --k 0.01");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "cycle: not clean");
  EXPECT_NE(r.out.find("reruns       = 3"), std::string::npos);
}

TEST(CliSimulate, BaselineCsv) {
  const auto r = run("simulate --baseline 15 --csv");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  double t_controlled, t_baseline;
  ASSERT_EQ(std::sscanf(ls[0].c_str(), "%lf", &t_controlled), 1);
  ASSERT_EQ(std::sscanf(ls[1].c_str(), "%lf", &t_baseline), 1);
  EXPECT_LT(t_controlled, 15.0);
  EXPECT_EQ(t_baseline, 15.0);
}

TEST(CliSimulate, BadParameters) {
  EXPECT_EQ(run("simulate --k 0").status, 2);
  EXPECT_EQ(run("simulate --dirt 40").status, 2);
  EXPECT_EQ(run("simulate --dt -1").status, 2);
  EXPECT_EQ(run("simulate --baseline 0").status, 2);
}

TEST(CliSimulate, Deterministic) {
  const auto a = run("simulate --dirt 22 --k 0.15");
  const auto b = run("simulate --dirt 22 --k 0.15");
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSpecEnv, UsesEnvironmentFile) {
  auto text = slurp(kBundled);
  const auto pos = text.find("TERM medium TRI 4 7.5 11");
  text.replace(pos, 24, "TERM medium TRI 4 8.5 13");
  const auto p = scratch("env.flc");
  write(p, text);
  const auto r = run("eval --set dirtiness=15 --set saturation_time=5", "FUZZCTL_SPEC='" + p.string() + "'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).at(0), "wash_time = 8.50 min (medium)");
}
