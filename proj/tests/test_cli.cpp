#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PDIMLAB_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp(const std::string& name) { return ::testing::TempDir() + "pdimlab_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data lines (without the '#' header).
std::vector<std::string> body(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) {
    if (!l.starts_with("#")) out.push_back(l);
  }
  return out;
}

}  // namespace

TEST(Cli, BallTable) {
  const auto r = run("ball --group zd:2 --n 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.starts_with("# pdimlab 1.0.0\n"));
  const auto b = body(r.out);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[0], "group,radius,sphere_size,ball_size");
  EXPECT_EQ(b[4], "zd:2,3,12,25");
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("ball --bogus 3").code, 1);
  EXPECT_EQ(run("ball --group torus:2").code, 1);
  EXPECT_EQ(run("lambda-c --group zd:2 --theta 1.5").code, 1);
  EXPECT_EQ(run("lambda-c --group zd:2 --measure poly:3").code, 1);
  EXPECT_EQ(run("ball --config /nonexistent/config").code, 1);
}

TEST(Cli, CapExceededExitsTwo) {
  EXPECT_EQ(run("ball --group free:3 --n 10 --cap 1000").code, 2);
  EXPECT_EQ(run("spectral --group free:3 --measure uniform-ball:2 --nmax 12 --cap 500 --cheeger -1").code, 2);
}

TEST(Cli, HeaderEchoesResolvedConfigAndSeed) {
  const auto r = run("lambda-c --group free:2 --L 10 --trials 300 --seed 77");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# seed=77\n"), std::string::npos);
  EXPECT_NE(r.out.find("# L=10\n"), std::string::npos);
  EXPECT_NE(r.out.find("# command=lambda-c\n"), std::string::npos);
  const auto b = body(r.out);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], "group,measure,L,trials,theta,lambda_hat,ci_low,ci_high,capped,seed");
  EXPECT_TRUE(b[1].starts_with("free:2,uniform-ball:1,10,300,0.5,"));
  EXPECT_TRUE(b[1].ends_with(",false,77"));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = tmp("override.cfg");
  std::ofstream(cfg) << "# run settings\ngroup=free:2\nL=8\ntrials=200\nseed=5\n";
  const auto r = run("lambda-c --config " + cfg + " --seed 9");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# seed=9\n"), std::string::npos);
  EXPECT_NE(r.out.find("# trials=200\n"), std::string::npos);
  EXPECT_NE(r.out.find("# group=free:2\n"), std::string::npos);
}

TEST(Cli, SavedConfigReproducesOutput) {
  const auto saved = tmp("saved.cfg");
  const auto a = run("lambda-c --group zd:2 --L 8 --trials 200 --seed 12 --save-config " + saved);
  ASSERT_EQ(a.code, 0);
  const auto b = run("lambda-c --config " + saved);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, StructuralCapIsReportedNotFatal) {
  const auto r = run("lambda-c --group zd:1 --L 10 --trials 200");
  ASSERT_EQ(r.code, 0);
  const auto b = body(r.out);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_NE(b[1].find(",,,true,"), std::string::npos);
}

TEST(Cli, ExactSawWritesFractions) {
  const auto r = run("saw --group zd:2 --nmax 3 --exact");
  ASSERT_EQ(r.code, 0);
  const auto b = body(r.out);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[0], "group,measure,n,sigma_n,exact_flag,nu_upper");
  EXPECT_TRUE(b[3].starts_with("zd:2,uniform-ball:1,2,3/4,true,"));
}

TEST(Cli, SpectralJsonHasBothCheegerBounds) {
  const auto out = tmp("spectral.csv");
  const auto r = run("spectral --group free:2 --nmax 40 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(tmp("spectral.json")));
  EXPECT_EQ(j["version"], "1.0.0");
  EXPECT_TRUE(j["report"].contains("rho_hat"));
  EXPECT_TRUE(j["report"]["cheeger"]["bounds"].contains("raw"));
  EXPECT_TRUE(j["report"]["cheeger"]["bounds"].contains("degree_normalized"));
  const auto csv = body(slurp(out));
  EXPECT_EQ(csv[0], "group,measure,n,p_n,mode");
  EXPECT_EQ(csv.size(), 42u);
}

TEST(Cli, SweepJsonSchema) {
  const auto out = tmp("sweep.csv");
  const auto r = run("sweep --family free --k-list 2,3,4 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(tmp("sweep.json")));
  const auto& rep = j["report"];
  for (const char* key : {"group", "family", "points", "verdicts"}) EXPECT_TRUE(rep.contains(key)) << key;
  EXPECT_EQ(rep["points"].size(), 3u);
  EXPECT_EQ(body(slurp(out))[0], "group,family,params,measure,lambda_hat,ci_low,ci_high,capped,delta_atom,seed");
}

TEST(Cli, GiantComponentRows) {
  const auto r = run("giant --vertices 200 --lambda 2 --samples 3 --seed 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(body(r.out).size(), 4u);
}

TEST(Cli, SeedDeterminesOutput) {
  const auto a = run("lambda-c --group free:2 --L 8 --trials 200 --seed 3");
  const auto b = run("lambda-c --group free:2 --L 8 --trials 200 --seed 3 --threads 3");
  EXPECT_EQ(body(a.out), body(b.out));
}

TEST(Cli, SelftestSingleCriterion) {
  const auto r = run("selftest --criteria 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("criterion 4 [PASS]"), std::string::npos);
}
