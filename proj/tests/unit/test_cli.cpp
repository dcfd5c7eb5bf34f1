#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kxchain/cli.hpp"

using kxchain::run_cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kxchain_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  std::string generate(const std::vector<std::string>& flags, const std::string& name) {
    std::vector<std::string> args = {"generate"};
    args.insert(args.end(), flags.begin(), flags.end());
    args.push_back("--out");
    args.push_back(file(name));
    auto r = cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return file(name);
  }

  fs::path dir_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_F(CliTest, BenchReproducesFamilyLength) {
  auto inst = generate({"--family", "worst-ir", "--k", "4"}, "wir.json");
  auto r = cli({"bench", "--kind", "sopt", "--s", "4", "--instance", inst, "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "kind,s,length,certified,runtime_ms,config_digest,seed");
  EXPECT_EQ(lines[1].rfind("sopt,4,12,true,0,", 0), 0u) << lines[1];
  EXPECT_NE(r.out.find("\r\n"), std::string::npos);
}

TEST_F(CliTest, RunIsByteIdenticalAcrossReplays) {
  auto inst = generate({"--family", "chains", "--chains", "60;60", "--p", "0.3"}, "c.json");
  std::vector<std::string> args = {"run", "--mechanism", "avg", "--s", "64", "--f", "4", "--seed", "9", "--instance", inst};
  auto a = cli(args);
  auto b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  for (const char* key : {"status", "path", "welfare", "utilities", "trace_digest", "config", "config_digest", "seed",
                          "search_trace_length", "stitch_count"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seed"], 9);
}

TEST_F(CliTest, RunWithTraceEmbedsEvents) {
  auto inst = generate({"--family", "chains", "--chains", "24;24", "--p", "1"}, "c.json");
  auto r = cli({"run", "--mechanism", "s", "--s", "8", "--f", "2", "--seed", "1", "--instance", inst, "--trace"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "success");
  ASSERT_TRUE(j["trace"].is_array());
  EXPECT_FALSE(j["trace"].empty());
}

TEST_F(CliTest, MonteCarloCertainEdges) {
  auto inst = generate({"--family", "chains", "--chains", "24;24", "--p", "1"}, "c.json");
  auto r = cli({"montecarlo", "--mechanism", "s", "--s", "8", "--f", "2", "--trials", "1000", "--seed", "0",
                "--instance", inst});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["success_rate"], 1.0);
  EXPECT_EQ(j["trials"], 1000);
}

TEST_F(CliTest, MonteCarloJsonLines) {
  auto inst = generate({"--family", "chains", "--chains", "24;24", "--p", "0.5"}, "c.json");
  auto r = cli({"montecarlo", "--mechanism", "avg", "--s", "16", "--f", "2", "--trials", "5", "--seed", "3",
                "--instance", inst, "--jsonl", file("trials.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = split_lines(slurp(file("trials.jsonl")));
  ASSERT_EQ(lines.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    auto rec = nlohmann::json::parse(lines[i]);
    EXPECT_EQ(rec["seed"], 3 + i);
  }
}

TEST_F(CliTest, AuditCsv) {
  auto inst = generate({"--family", "fuzz", "--seed", "4", "--max-n", "8"}, "f.json");
  auto r = cli({"audit", "--mechanism", "avg", "--s", "2", "--f", "2", "--seed", "4", "--instance", inst, "--exhaustive"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = split_lines(r.out);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "hospital,truthful_utility,best_utility,gap_ratio,witness_hidden_count,witness_divert_node,config_digest,seed");
}

TEST_F(CliTest, GenerateWritesCertificates) {
  auto path = generate({"--family", "semirandom-ir", "--k", "2"}, "s.json");
  auto doc = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(doc["n"], 17);
  EXPECT_EQ(doc["certificates"]["family"], "semirandom-ir");
  EXPECT_FALSE(doc["certificates"]["items"].empty());
  auto again = generate({"--family", "semirandom-ir", "--k", "2"}, "s2.json");
  EXPECT_EQ(slurp(path), slurp(again));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli({}).code, kxchain::kExitUsage);
  EXPECT_EQ(cli({"run", "--mechanism", "vcg", "--s", "2", "--instance", "x"}).code, kxchain::kExitUsage);
  EXPECT_EQ(cli({"run", "--mechanism", "s", "--s", "2", "--seed", "0", "--instance", file("missing.json")}).code,
            kxchain::kExitIo);
  std::ofstream(file("bad.json")) << R"({"n": 2, "altruist": 0, "owners": [0, 1], "base_edges": [], "p": "0", "extra": 1})";
  EXPECT_EQ(cli({"run", "--mechanism", "s", "--s", "2", "--seed", "0", "--instance", file("bad.json")}).code,
            kxchain::kExitUsage);
  auto big = generate({"--family", "fuzz", "--seed", "1", "--chains", "10,10,10;10", "--internal-density", "0.3"},
                      "big.json");
  EXPECT_EQ(cli({"bench", "--kind", "opt", "--instance", big, "--exact-limit", "5"}).code, kxchain::kExitBudget);
}

TEST_F(CliTest, HelpListsFlags) {
  auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  auto sub = cli({"audit", "--help"});
  EXPECT_EQ(sub.code, 0);
  EXPECT_NE(sub.out.find("--no-diversion"), std::string::npos);
  for (const char* flag : {"--mechanism", "--instance", "--exhaustive", "--samples", "--trials", "--family", "--kind"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

TEST_F(CliTest, BinaryWritesSameBytesAsLibrary) {
  auto inst = generate({"--family", "worst-ir", "--k", "3"}, "w.json");
  const std::string cmd = std::string(KXCHAIN_CLI_PATH) + " run --mechanism s --s 3 --seed 2 --instance " + inst;
  std::string bytes;
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) bytes.append(buf, got);
  EXPECT_EQ(pclose(pipe), 0);
  EXPECT_EQ(bytes, cli({"run", "--mechanism", "s", "--s", "3", "--seed", "2", "--instance", inst}).out);
}
