#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "egucb/error.hpp"
#include "egucb/event_log.hpp"
#include "egucb/harness.hpp"
#include "egucb/snapshot.hpp"
#include "oracles.hpp"

namespace egucb {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  for (std::string line; std::getline(s, line);) out.push_back(line);
  return out;
}

// Drops the leading policy column.
std::vector<std::string> without_policy(const std::vector<std::string>& rows) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i].substr(rows[i].find(',')));
  return out;
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("egucb_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

TEST_F(HarnessTest, DefaultGradientRunHasTenWindows) {
  const ExperimentConfig config = parse_config("");
  EXPECT_EQ(config.policy, PolicyKind::kGradientLinUcb);
  const auto out = cmd_run(config, path("run.csv"));
  const auto rows = lines_of(slurp(out.csv_path));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front(), kCsvHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].rfind("gradient_linucb,1,", 0), 0u) << rows[i];

  const std::string meta = slurp(out.metadata_path);
  EXPECT_NE(meta.find("policy = gradient_linucb"), std::string::npos);
  EXPECT_NE(meta.find("seed = 1"), std::string::npos);
  EXPECT_NE(meta.find("code_version = "), std::string::npos);
  EXPECT_NE(meta.find("eg_final_p.gradient_linucb.1 = ["), std::string::npos);
  EXPECT_NE(meta.find("wall_clock_seconds = "), std::string::npos);
  // The sidecar is itself a valid config once the run-specific lines are removed.
  std::string config_part;
  for (const auto& line : lines_of(meta)) {
    if (line.rfind("command", 0) == 0 || line.rfind("code_version", 0) == 0 || line.rfind("cumulative_ctr", 0) == 0 ||
        line.rfind("random_rounds", 0) == 0 || line.rfind("eg_final_p", 0) == 0 || line.rfind("wall_clock", 0) == 0)
      continue;
    config_part += line + "\n";
  }
  EXPECT_EQ(to_config_text(parse_config(config_part)), to_config_text(config));
}

TEST_F(HarnessTest, RunIsByteIdenticalAcrossInvocations) {
  const ExperimentConfig config = parse_config("policy = gradient_linucb\nrounds = 3000\nseed = 17");
  cmd_run(config, path("a.csv"));
  cmd_run(config, path("b.csv"));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  ExperimentConfig other = config;
  other.seed = 18;
  cmd_run(other, path("c.csv"));
  EXPECT_NE(without_policy(lines_of(slurp(path("a.csv")))), without_policy(lines_of(slurp(path("c.csv")))));
}

TEST_F(HarnessTest, ZeroGridGradientMatchesLinUcb) {
  ExperimentConfig g = parse_config("policy = gradient_linucb\neg_candidates = [0]\nrounds = 4000\nwindow = 500");
  ExperimentConfig l = parse_config("policy = linucb\nrounds = 4000\nwindow = 500");
  cmd_run(g, path("g.csv"));
  cmd_run(l, path("l.csv"));
  EXPECT_EQ(without_policy(lines_of(slurp(path("g.csv")))), without_policy(lines_of(slurp(path("l.csv")))));
}

TEST_F(HarnessTest, CompareCoversSuiteAndSortsRows) {
  const ExperimentConfig config = parse_config("rounds = 1500\nwindow = 500\nnum_seeds = 2");
  const auto out = cmd_compare(config, path("cmp.csv"));
  const auto rows = lines_of(slurp(out.csv_path));
  EXPECT_EQ(rows.size(), 1u + 6u * 2u * 3u);
  std::set<std::string> labels;
  for (std::size_t i = 1; i < rows.size(); ++i) labels.insert(rows[i].substr(0, rows[i].find(',')));
  EXPECT_EQ(labels, (std::set<std::string>{"exploit", "epsilon_greedy", "epsilon_decreasing", "eg_greedy", "linucb",
                                           "gradient_linucb"}));
  std::vector<std::string> body(rows.begin() + 1, rows.end());
  EXPECT_TRUE(std::is_sorted(body.begin(), body.end()));
}

TEST_F(HarnessTest, SinglePolicyCompareEqualsRun) {
  const ExperimentConfig config = parse_config("policy = linucb\npolicies = [linucb]\nrounds = 2500\nseed = 4");
  cmd_run(config, path("run.csv"));
  cmd_compare(config, path("cmp.csv"));
  EXPECT_EQ(slurp(path("run.csv")), slurp(path("cmp.csv")));
}

TEST_F(HarnessTest, PoliciesSeeTheSameRounds) {
  const ExperimentConfig config = parse_config("rounds = 300");
  std::vector<RoundRecord> a, b;
  run_simulation(config, PolicyKind::kLinUcb, 9, &a);
  run_simulation(config, PolicyKind::kRandom, 9, &b);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    ASSERT_EQ(a[t].offered.size(), b[t].offered.size());
    for (std::size_t k = 0; k < a[t].offered.size(); ++k) {
      EXPECT_EQ(a[t].offered[k].id, b[t].offered[k].id);
      EXPECT_EQ(a[t].offered[k].context.features, b[t].offered[k].context.features);
    }
  }
}

TEST_F(HarnessTest, ReplaySingleArmLogMatchesEverything) {
  ReplayDataset ds;
  ds.d = 2;
  for (std::uint64_t t = 1; t <= 40; ++t) {
    RoundRecord r;
    r.t = t;
    r.offered = {Candidate{ArmId{"only" + std::to_string(t % 3)}, Context{Vec{0.6, 0.8}}}};
    r.chosen = r.offered.front().id;
    r.reward = static_cast<int>(t % 2);
    ds.events.push_back(r);
  }
  write_event_log_file(path("single.jsonl"), ds);
  const auto out = cmd_replay(parse_config("policy = linucb\nwindow = 10"), path("single.jsonl"), path("r.csv"));
  EXPECT_EQ(*out.results.front().report.matched_events, 40u);
  EXPECT_NE(slurp(out.metadata_path).find("matched_events.linucb.1 = 40"), std::string::npos);
}

TEST_F(HarnessTest, ReplayUniformLogExploitMatchRate) {
  const ExperimentConfig config = parse_config("policy = exploit\nseed = 5");
  cmd_genlog(config, 10000, path("log.jsonl"));
  const auto out = cmd_replay(config, path("log.jsonl"), path("r.csv"));
  const double frac = *out.results.front().report.matched_events / 10000.0;
  EXPECT_TRUE(testing::within_binomial(frac, 1.0 / 10.0, 10000)) << frac;
}

TEST_F(HarnessTest, ReplayErrors) {
  const ExperimentConfig config = parse_config("policy = linucb");
  std::ofstream(path("empty.jsonl")).close();
  try {
    cmd_replay(config, path("empty.jsonl"), path("r.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  std::ofstream(path("header_only.jsonl")) << R"({"format":"egucb-events","version":1,"d":3})" << '\n';
  try {
    cmd_replay(config, path("header_only.jsonl"), path("r.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  try {
    cmd_replay(config, path("missing.jsonl"), path("r.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileError);
  }
  try {
    cmd_run(config, dir_ / "no_such_dir" / "x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileError);
    EXPECT_NE(std::string(e.what()).find("no_such_dir"), std::string::npos);
  }
}

TEST_F(HarnessTest, SnapshotsRestoreLearnerState) {
  const ExperimentConfig config = parse_config("policy = gradient_linucb\nrounds = 1200");
  cmd_run(config, path("run.csv"), path("snap.json"));
  const auto doc = nlohmann::json::parse(slurp(path("snap.json")));
  EXPECT_EQ(doc["policy"], "gradient_linucb");
  const LinUcbState lin = load_linucb_snapshot(doc["linucb"].dump());
  const EgState eg = load_eg_snapshot(doc["eg"].dump());
  EXPECT_EQ(lin.dim(), 10u);
  std::uint64_t pulls = 0;
  for (const auto& [id, m] : lin.arms()) {
    pulls += m.pulls;
    EXPECT_TRUE(m.a_inv.is_symmetric(1e-12));
  }
  EXPECT_EQ(pulls, 1200u);
  EXPECT_EQ(eg.candidates(), config.eg_candidates);

  // Text form is lossless.
  EXPECT_EQ(linucb_snapshot(load_linucb_snapshot(linucb_snapshot(lin))), linucb_snapshot(lin));
  EXPECT_EQ(eg_snapshot(load_eg_snapshot(eg_snapshot(eg))), eg_snapshot(eg));
  try {
    load_eg_snapshot(doc["linucb"].dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidData);
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EGUCB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(HarnessTest, CliExitCodes) {
  std::ofstream(path("ok.cfg")) << "policy = linucb\nrounds = 500\nwindow = 100\n";
  std::ofstream(path("bad.cfg")) << "polcy = linucb\n";
  EXPECT_EQ(run_cli("run --config " + path("ok.cfg").string() + " --seed 3 --out " + path("o.csv").string()), 0);
  EXPECT_EQ(lines_of(slurp(path("o.csv"))).size(), 6u);
  EXPECT_NE(slurp(path("o.csv.meta")).find("seed = 3"), std::string::npos);
  EXPECT_EQ(run_cli("run --config " + path("bad.cfg").string()), 1);
  EXPECT_EQ(run_cli("run --config " + path("missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("replay --config " + path("ok.cfg").string() + " --log " + path("nope.jsonl").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli("genlog --config " + path("ok.cfg").string() + " --events 50 --out " + path("l.jsonl").string()),
            0);
  EXPECT_EQ(run_cli("replay --config " + path("ok.cfg").string() + " --log " + path("l.jsonl").string() +
                    " --out " + path("r.csv").string()),
            0);
  EXPECT_EQ(run_cli("run --config " + path("ok.cfg").string() + " --out " + path("s.csv").string() + " --snapshot " +
                    path("s.json").string()),
            0);
  EXPECT_EQ(run_cli("inspect --snapshot " + path("s.json").string()), 0);
}

}  // namespace
}  // namespace egucb
