#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "support/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(TAMEREP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tamerep_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, PairsMatchBruteForce) {
  const Outcome r = run("pairs --n 8 --ell 3 --p-max 60 --t-max 20");
  ASSERT_EQ(r.code, 0);
  std::vector<oracle::Pair> got;
  for (const auto& c : json::parse(r.out)) got.push_back({c["p"].get<oracle::u64>(), c["t"].get<oracle::u64>()});
  EXPECT_EQ(got, oracle::brute_force_pairs(8, 3, 60, 20));
}

TEST_F(CliTest, PairsUsageErrors) {
  EXPECT_EQ(run("pairs --n 7 --ell 3 --p-max 60 --t-max 20").code, 2);
  EXPECT_EQ(run("pairs --n 8 --ell 3").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(CliTest, PairsOutputIsStableAcrossRunsAndJobs) {
  const Outcome a = run("pairs --n 8 --ell 5 --p-max 300 --t-max 300 --jobs 1");
  const Outcome b = run("pairs --n 8 --ell 5 --p-max 300 --t-max 300 --jobs 4 --seed 99");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, CertVerifyRoundTrip) {
  const fs::path cert = dir_ / "c.json";
  ASSERT_EQ(run("cert --n 8 --p 19 --t 17 --sign -1 --ell 13 --output " + cert.string()).code, 0);
  const Outcome v = run("verify " + cert.string());
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "OK\n");

  const fs::path again = dir_ / "d.json";
  ASSERT_EQ(run("cert --n 8 --p 19 --t 17 --sign -1 --ell 13 -o " + again.string()).code, 0);
  EXPECT_EQ(slurp(cert), slurp(again));
  EXPECT_EQ(run("cert --n 8 --p 19 --t 17 --sign -1 --ell 13").out, slurp(cert));
}

TEST_F(CliTest, VerifyDetectsTampering) {
  const fs::path cert = dir_ / "c.json";
  ASSERT_EQ(run("cert --n 8 --p 19 --t 17 --sign 1 --ell 13 -o " + cert.string()).code, 0);
  json j = json::parse(slurp(cert));
  j["image_order"] = 137;
  spit(dir_ / "tampered.json", j.dump(2));
  EXPECT_EQ(run("verify " + (dir_ / "tampered.json").string()).code, 4);

  j = json::parse(slurp(cert));
  j["schema_version"] = "2";
  spit(dir_ / "schema.json", j.dump(2));
  EXPECT_EQ(run("verify " + (dir_ / "schema.json").string()).code, 2);

  spit(dir_ / "garbage.json", "{not json");
  EXPECT_EQ(run("verify " + (dir_ / "garbage.json").string()).code, 2);
  EXPECT_EQ(run("verify " + (dir_ / "absent.json").string()).code, 2);
}

TEST_F(CliTest, CertPreconditionFailures) {
  EXPECT_EQ(run("cert --n 8 --p 19 --t 3 --sign 1 --ell 13").code, 3);
  EXPECT_EQ(run("cert --n 8 --p 19 --t 17 --sign 1 --ell 17").code, 3);
  EXPECT_EQ(run("cert --n 8 --p 19 --t 17 --sign 2 --ell 13").code, 2);
}

TEST_F(CliTest, ClassifyFromFiles) {
  // hyperbolic plane over F_3 with its full similitude group
  spit(dir_ / "gram.json", "[[[0],[1]],[[1],[0]]]");
  spit(dir_ / "gens.json", "[ [[[0],[1]],[[1],[0]]], [[[1],[0]],[[0],[2]]], [[[2],[0]],[[0],[2]]] ]");
  const fs::path out = dir_ / "out.json";
  const Outcome r = run("classify --generators " + (dir_ / "gens.json").string() + " --gram " +
                    (dir_ / "gram.json").string() + " --p 3 --promise -o " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "PGO");
  EXPECT_EQ(json::parse(slurp(out))["label"], "PGO");

  spit(dir_ / "bad.json", "[ [[[1],[1]],[[0],[1]]] ]");
  EXPECT_EQ(run("classify --generators " + (dir_ / "bad.json").string() + " --gram " + (dir_ / "gram.json").string() +
                " --p 3 --promise")
                .code,
            3);
  spit(dir_ / "odd.json", "[[[1]]]");
  EXPECT_EQ(run("classify --generators " + (dir_ / "gens.json").string() + " --gram " + (dir_ / "odd.json").string() +
                " --p 3")
                .code,
            2);
}

TEST_F(CliTest, Selftest) {
  const Outcome r = run("selftest");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("selftest passed"), std::string::npos);
}
