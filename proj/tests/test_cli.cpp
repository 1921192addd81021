#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlscale/cli.hpp"

using namespace mlscale;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MLSCALE_DATA_DIR;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mlscale");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::dispatch(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    runs_ = fs::temp_directory_path() / ("mlscale_cli_" + std::to_string(::getpid()));
    fs::remove_all(runs_);
    first_exit_ = run_cli({"run-scaling", "--config", (kData / "run_mock.json").string(), "--languages",
                           "en,vi", "--samples", "1", "--run", "r", "--runs-dir", runs_.string()});
  }
  static void TearDownTestSuite() { fs::remove_all(runs_); }

  std::vector<std::string> with_run(std::vector<std::string> args) {
    args.insert(args.end(), {"--run", "r", "--runs-dir", runs_.string()});
    return args;
  }

  static fs::path runs_;
  static int first_exit_;
};

fs::path CliRun::runs_;
int CliRun::first_exit_ = -1;

}  // namespace

TEST(CliArgs, UnknownFlagExitsTwo) {
  EXPECT_EQ(run_cli({"curve", "--bogus"}), 2);
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"run-scaling", "--config", "/nonexistent.json"}), 2);
  EXPECT_EQ(run_cli({"curve", "--group", "planet", "--run", "x"}), 2);
}

TEST(CliArgs, MissingRunIsConfigError) {
  auto dir = fs::temp_directory_path() / ("mlscale_cli_empty_" + std::to_string(::getpid()));
  EXPECT_EQ(run_cli({"curve", "--run", "nope", "--runs-dir", dir.string()}), 2);
  EXPECT_EQ(run_cli({"report"}), 2);
}

TEST(CliArgs, ListParsing) {
  EXPECT_EQ(cli::parse_language_list("en, vi,en"), (std::vector<Language>{Language::en, Language::vi}));
  EXPECT_THROW(cli::parse_language_list("en,fr"), ConfigError);
  EXPECT_EQ(cli::parse_limit_list("2000,4000"), (std::vector<std::int64_t>{2000, 4000}));
  EXPECT_THROW(cli::parse_limit_list("20x"), ConfigError);
  EXPECT_THROW(cli::parse_limit_list(""), ConfigError);
}

TEST(CliCsv, QuotingRoundTrip) {
  auto path = fs::temp_directory_path() / ("mlscale_csv_" + std::to_string(::getpid()) + ".csv");
  cli::CsvWriter w({"a", "b"});
  w.row({"x,y", "say \"hi\""});
  w.write(path);
  EXPECT_EQ(slurp(path), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  auto rows = cli::read_csv(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x,y");
  EXPECT_EQ(rows[1][1], "say \"hi\"");
  fs::remove(path);
}

TEST(CliSeed, PerCellSeedsDiffer) {
  EXPECT_NE(cli::cell_seed(7, "en.D.1.s000"), cli::cell_seed(7, "en.D.1.s001"));
  EXPECT_NE(cli::cell_seed(7, "en.D.1.s000"), cli::cell_seed(8, "en.D.1.s000"));
  EXPECT_EQ(cli::cell_seed(7, "en.D.1.s000"), cli::cell_seed(7, "en.D.1.s000"));
}

TEST_F(CliRun, RunScalingProducesDoneManifest) {
  ASSERT_EQ(first_exit_, 0);
  auto rs = store::RunStore::open(runs_, "r");
  EXPECT_EQ(rs.manifest().cells.size(), 60u);
  EXPECT_EQ(rs.cells_with(store::CellStatus::done).size(), 60u);
  std::size_t en = 0, vi = 0;
  for (const auto& c : rs.manifest().cells) (c.language == Language::en ? en : vi) += 1;
  EXPECT_EQ(en, 30u);
  EXPECT_EQ(vi, 30u);
  auto t = rs.read_trace(rs.manifest().cells.front().id());
  EXPECT_EQ(t.generated_count(), 640u);
  EXPECT_EQ(rs.read_answers(rs.manifest().cells.front().id())->size(), 20u);
}

TEST_F(CliRun, RerunSkipsDoneCellsAndRejectsChangedConfig) {
  ASSERT_EQ(first_exit_, 0);
  auto trace = store::RunStore::open(runs_, "r").trace_path("en.AIME2024-I.01.s000");
  auto before = fs::last_write_time(trace);
  EXPECT_EQ(run_cli({"run-scaling", "--config", (kData / "run_mock.json").string(), "--languages", "en,vi",
                     "--samples", "1", "--run", "r", "--runs-dir", runs_.string()}),
            0);
  EXPECT_EQ(fs::last_write_time(trace), before);
  EXPECT_EQ(run_cli({"run-scaling", "--config", (kData / "run_mock.json").string(), "--languages", "en",
                     "--samples", "1", "--run", "r", "--runs-dir", runs_.string()}),
            2);
}

TEST_F(CliRun, CurveByLanguageIsStep) {
  ASSERT_EQ(first_exit_, 0);
  ASSERT_EQ(run_cli(with_run({"curve"})), 0);
  auto rows = cli::read_csv(runs_ / "r" / "analytics" / "curve_language.csv");
  ASSERT_EQ(rows.size(), 1u + 2u * 20u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"group", "reasoning_tokens", "accuracy", "n"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto tokens = std::stoll(rows[i][1]);
    EXPECT_EQ(rows[i][2], tokens >= 320 ? "1" : "0") << tokens;
    EXPECT_EQ(rows[i][3], "30");
  }
}

TEST_F(CliRun, CurveResourceClassWithLimits) {
  ASSERT_EQ(first_exit_, 0);
  ASSERT_EQ(run_cli(with_run({"curve", "--group", "resource-class", "--limits", "2000,4000,6000,8000"})), 0);
  auto rows = cli::read_csv(runs_ / "r" / "analytics" / "curve_resource-class.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"group", "2000", "4000", "6000", "8000"}));
  EXPECT_EQ(rows[1][0], "high");
  EXPECT_EQ(rows[2][0], "low");
  for (std::size_t i = 1; i < 3; ++i) EXPECT_EQ(rows[i].size(), 5u);
}

TEST_F(CliRun, AnalyticsAndReport) {
  ASSERT_EQ(first_exit_, 0);
  EXPECT_EQ(run_cli(with_run({"similarity"})), 0);
  auto sim = cli::read_csv(runs_ / "r" / "analytics" / "similarity_mean.csv");
  EXPECT_GT(sim.size(), 1u);
  // Only one sample per question: every cell is short of the 100 prefixes.
  EXPECT_EQ(run_cli(with_run({"consistency"})), 1);
  auto deficits = cli::read_csv(runs_ / "r" / "analytics" / "prefix_deficits.csv");
  EXPECT_EQ(deficits.size(), 61u);
  EXPECT_EQ(run_cli(with_run({"fidelity"})), 1);
  ASSERT_EQ(run_cli(with_run({"curve"})), 0);
  testing::internal::CaptureStdout();
  EXPECT_EQ(run_cli(with_run({"report"})), 0);
  auto text = testing::internal::GetCapturedStdout();
  EXPECT_NE(text.find("done: 60"), std::string::npos);
  EXPECT_NE(text.find("deficits"), std::string::npos);
  EXPECT_NE(text.find("more in prefix_deficits.csv"), std::string::npos);
  EXPECT_NE(text.find("intra-language consistency"), std::string::npos);
  EXPECT_EQ(slurp(runs_ / "r" / "analytics" / "report.txt"), text);
}

TEST_F(CliRun, ExportPrefixesHonoursStrategy) {
  ASSERT_EQ(first_exit_, 0);
  EXPECT_EQ(run_cli(with_run({"export-prefixes", "--strategy", "e3"})), 1);
  auto records = mittx::read_training_file(runs_ / "r" / "exports" / "mitt_e3.jsonl");
  EXPECT_EQ(records.size(), 30u);
  for (const auto& r : records) EXPECT_EQ(r.language, Language::en);
  // H1 needs de, it and pt prefixes which this run lacks.
  EXPECT_EQ(run_cli(with_run({"export-prefixes", "--strategy", "h1"})), 2);
}

TEST(Config, ParseResolvesPathsAndValidates) {
  auto cfg = config::parse_config(json::parse(R"({
    "dataset": "d.json", "languages": ["vi", "en"], "samples": 3,
    "policy": {"budget": 1000, "stride": 10, "checkpoint_mode": "at_limits", "limits": [100, 200]},
    "prefix": {"samples": 5, "tokens": 8},
    "endpoints": {"completion": {"kind": "mock", "script": "s.json"}}})"),
                                  "/cfg");
  EXPECT_EQ(cfg.dataset, fs::path("/cfg/d.json"));
  EXPECT_EQ(cfg.completion.script, "/cfg/s.json");
  EXPECT_EQ(cfg.languages, (std::vector<Language>{Language::vi, Language::en}));
  EXPECT_EQ(cfg.policy.mode, scaler::CheckpointMode::at_limits);
  EXPECT_EQ(cfg.prefix_tokens, 8u);
  EXPECT_NO_THROW(cfg.validate());

  EXPECT_THROW(config::parse_config(json::parse(R"({"policy":{"checkpoint_mode":"sometimes"}})")), ConfigError);
  EXPECT_THROW(config::parse_config(json::parse(R"({"languages":["xx"]})")), ConfigError);
  EXPECT_THROW(config::parse_config(json::parse(R"({"samples":"many"})")), ConfigError);
  auto bad = cfg;
  bad.policy.limits = {5000};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.completion.kind = "carrier-pigeon";
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, SnapshotLeavesOutEndpointsAndKeys) {
  config::RunConfig c;
  c.dataset = "/d.json";
  c.completion.url = "http://secret-host:1/v1/completions";
  c.completion.api_key = "sk-123";
  auto snap = config::snapshot(c);
  auto text = snap.dump();
  EXPECT_EQ(text.find("secret-host"), std::string::npos);
  EXPECT_EQ(text.find("sk-123"), std::string::npos);
  EXPECT_FALSE(snap.contains("parallelism"));
  auto back = config::from_snapshot(snap, c);
  EXPECT_EQ(config::snapshot(back), snap);
  EXPECT_EQ(back.completion.url, c.completion.url);
}

TEST(Config, EnvironmentOverrides) {
  ::setenv("HARNESS_API_KEY", "k1", 1);
  ::setenv("HARNESS_COMPLETION_URL", "http://127.0.0.1:9/v1/completions", 1);
  config::RunConfig c;
  config::apply_environment(c);
  EXPECT_EQ(c.completion.api_key, "k1");
  EXPECT_EQ(c.completion.kind, "http");
  EXPECT_EQ(c.completion.url, "http://127.0.0.1:9/v1/completions");
  ::unsetenv("HARNESS_API_KEY");
  ::unsetenv("HARNESS_COMPLETION_URL");
}
