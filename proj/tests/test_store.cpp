#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlscale/store.hpp"

using namespace mlscale;
using store::CellKey;
using store::CellStatus;
using store::RunStore;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("mlscale_store_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<CellKey> cells(int n) {
  std::vector<CellKey> out;
  for (int i = 0; i < n; ++i) out.push_back({Language::en, {"AIME2024-I", std::to_string(i)}, 0});
  return out;
}

ReasoningTrace sample_trace(const std::string& id, int n) {
  ReasoningTrace t;
  t.trace_id = id;
  t.question = {"D", "1"};
  t.budget = 100;
  t.prompt = "p\nq";
  for (int i = 0; i < n; ++i) {
    if (i == 2) t.tokens.push_back({" Wait", std::nullopt, true});
    t.tokens.push_back({" t" + std::to_string(i), i, false});
  }
  t.injections = 1;
  return t;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines, bool trailing_newline = true) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << lines[i];
    if (i + 1 < lines.size() || trailing_newline) out << '\n';
  }
}

void write_trace(RunStore& s, const ReasoningTrace& t) {
  auto w = s.open_trace(t);
  for (const auto& tok : t.tokens) w.append(tok);
  w.finish(t);
}

}  // namespace

TEST(Store, CellIdIsFilesystemSafe) {
  CellKey k{Language::vi, {"AIME 2025/I", "07"}, 3};
  EXPECT_EQ(k.id(), "vi.AIME_2025_I.07.s003");
}

TEST(Store, Transitions) {
  using S = CellStatus;
  EXPECT_TRUE(store::transition_allowed(S::pending, S::running));
  EXPECT_TRUE(store::transition_allowed(S::running, S::done));
  EXPECT_TRUE(store::transition_allowed(S::running, S::failed));
  EXPECT_TRUE(store::transition_allowed(S::failed, S::pending));
  EXPECT_FALSE(store::transition_allowed(S::done, S::running));
  EXPECT_FALSE(store::transition_allowed(S::pending, S::done));
}

TEST(Store, FreshRunHasAllCellsPending) {
  TempDir d("fresh");
  auto s = RunStore::create(d.path, "r", json{{"a", 1}}, 7, cells(5));
  EXPECT_EQ(s.cells_with(CellStatus::pending).size(), 5u);
  EXPECT_TRUE(fs::exists(d.path / "r" / "manifest.json"));
  EXPECT_TRUE(fs::is_directory(d.path / "r" / "traces"));
  EXPECT_EQ(s.manifest().seed, 7u);
  EXPECT_THROW(RunStore::create(d.path, "r", json{{"a", 2}}, 7, cells(5)), ConfigError);
  EXPECT_NO_THROW(RunStore::create(d.path, "r", json{{"a", 1}}, 7, cells(5)));
  EXPECT_THROW(RunStore::open(d.path, "missing"), StoreError);
}

TEST(Store, StatusLogReplaysAndRejectsIllegalTransitions) {
  TempDir d("status");
  auto cs = cells(4);
  {
    auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
    for (int i = 0; i < 3; ++i) {
      s.set_status(cs[i].id(), CellStatus::running);
      s.set_status(cs[i].id(), CellStatus::done);
    }
    EXPECT_THROW(s.set_status(cs[0].id(), CellStatus::running), StoreError);
    EXPECT_THROW(s.set_status("nope", CellStatus::running), InputError);
  }
  auto s = RunStore::open(d.path, "r");
  EXPECT_EQ(s.cells_with(CellStatus::done).size(), 3u);
  EXPECT_EQ(s.status(cs[3].id()), CellStatus::pending);
  EXPECT_EQ(s.status_counts().at(CellStatus::done), 3u);
}

TEST(Store, TornStatusLineIsCutOff) {
  TempDir d("torn");
  auto cs = cells(2);
  {
    auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
    s.set_status(cs[0].id(), CellStatus::running);
  }
  auto log = d.path / "r" / "status.jsonl";
  {
    std::ofstream out(log, std::ios::app | std::ios::binary);
    out << R"({"cell":")" << cs[0].id() << R"(","sta)";
  }
  auto s = RunStore::open(d.path, "r");
  EXPECT_EQ(s.status(cs[0].id()), CellStatus::running);
  EXPECT_EQ(lines_of(log).size(), 1u);
  s.set_status(cs[0].id(), CellStatus::done);
  EXPECT_EQ(RunStore::open(d.path, "r").status(cs[0].id()), CellStatus::done);
}

TEST(Store, CorruptStatusLineNamesLine) {
  TempDir d("badlog");
  auto cs = cells(1);
  { RunStore::create(d.path, "r", json::object(), 0, cs); }
  write_lines(d.path / "r" / "status.jsonl", {R"({"cell":")" + cs[0].id() + R"(","status":"running"})", "garbage",
                                              R"({"cell":")" + cs[0].id() + R"(","status":"done"})"});
  try {
    RunStore::open(d.path, "r");
    FAIL() << "expected corruption";
  } catch (const CorruptionError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Store, TraceRoundTripPreservesOrder) {
  TempDir d("trace");
  auto cs = cells(1);
  auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
  auto t = sample_trace(cs[0].id(), 5);
  write_trace(s, t);
  auto back = s.read_trace(cs[0].id());
  EXPECT_EQ(back.tokens, t.tokens);
  EXPECT_EQ(back.injections, 1);
  EXPECT_EQ(back.prompt, t.prompt);
  EXPECT_EQ(back.question, t.question);
  auto lines = lines_of(s.trace_path(cs[0].id()));
  ASSERT_EQ(lines.size(), 1 + t.tokens.size() + 1);
  EXPECT_EQ(lines[1], R"({"i":0,"inj":false,"t":" t0"})");
  EXPECT_EQ(lines[3], R"({"i":null,"inj":true,"t":" Wait"})");
  EXPECT_FALSE(fs::exists(s.trace_path(cs[0].id()).string() + ".inprogress"));
}

TEST(Store, TraceCorruptionReportsLineNumber) {
  TempDir d("corrupt");
  auto cs = cells(1);
  auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
  auto t = sample_trace(cs[0].id(), 5);
  write_trace(s, t);
  auto path = s.trace_path(cs[0].id());
  auto good = lines_of(path);

  auto expect_line = [&](std::vector<std::string> lines, std::size_t line, bool newline = true) {
    write_lines(path, lines, newline);
    try {
      store::read_trace_file(path);
      ADD_FAILURE() << "expected corruption at line " << line;
    } catch (const CorruptionError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };

  auto bad = good;
  bad[4] = "{\"t\": oops";
  expect_line(bad, 5);

  auto truncated = good;
  truncated.back() = truncated.back().substr(0, truncated.back().size() / 2);
  expect_line(truncated, good.size(), false);

  auto no_end = good;
  no_end.pop_back();
  expect_line(no_end, good.size() - 1);

  auto extra = good;
  extra.push_back(good[1]);
  expect_line(extra, good.size() + 1);

  auto no_header = good;
  no_header.erase(no_header.begin());
  expect_line(no_header, 1);

  auto miscount = good;
  miscount.erase(miscount.begin() + 2);
  expect_line(miscount, good.size() - 1);

  expect_line({}, 1);
}

TEST(Store, AnswersRoundTrip) {
  TempDir d("answers");
  auto cs = cells(1);
  auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
  EXPECT_FALSE(s.read_answers(cs[0].id()));
  CheckpointAnswer a;
  a.k = 1;
  a.reasoning_tokens = 32;
  a.raw_answer_text = "\\boxed{5}";
  a.parsed_answer = 5;
  a.parse_status = ParseStatus::boxed;
  a.correct = true;
  s.write_answers(cs[0].id(), {a});
  auto back = s.read_answers(cs[0].id());
  ASSERT_TRUE(back);
  ASSERT_EQ(back->size(), 1u);
  EXPECT_EQ((*back)[0].parsed_answer, 5);
  EXPECT_EQ((*back)[0].parse_status, ParseStatus::boxed);
}

TEST(Store, CrashMidTraceRecoversToPendingAndKeepsPartial) {
  TempDir d("crash");
  auto cs = cells(2);
  {
    auto s = RunStore::create(d.path, "r", json::object(), 0, cs);
    s.set_status(cs[0].id(), CellStatus::running);
    s.set_status(cs[0].id(), CellStatus::done);
  }
  pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    auto s = RunStore::open(d.path, "r");
    store::RunLock lock(s.dir());
    s.set_status(cs[1].id(), CellStatus::running);
    auto t = sample_trace(cs[1].id(), 3);
    auto w = s.open_trace(t);
    for (const auto& tok : t.tokens) w.append(tok);
    ::_exit(0);  // dies without finishing the trace
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  auto s = RunStore::open(d.path, "r");
  EXPECT_EQ(s.status(cs[1].id()), CellStatus::running);
  store::RunLock lock(s.dir());
  auto recovered = s.recover();
  EXPECT_EQ(recovered, std::vector<std::string>{cs[1].id()});
  EXPECT_EQ(s.status(cs[1].id()), CellStatus::pending);
  EXPECT_EQ(s.status(cs[0].id()), CellStatus::done);
  auto partial = fs::path(s.trace_path(cs[1].id()).string() + ".partial");
  ASSERT_TRUE(fs::exists(partial));
  EXPECT_EQ(lines_of(partial).size(), 1u + 4u);
  EXPECT_EQ(RunStore::open(d.path, "r").status(cs[1].id()), CellStatus::pending);
}

TEST(Store, LockIsExclusive) {
  TempDir d("lock");
  { RunStore::create(d.path, "r", json::object(), 0, cells(1)); }
  auto dir = d.path / "r";
  {
    store::RunLock a(dir);
    try {
      store::RunLock b(dir);
      FAIL() << "second lock should fail";
    } catch (const StoreError& e) {
      EXPECT_NE(std::string(e.what()).find(std::to_string(::getpid())), std::string::npos);
    }
  }
  EXPECT_NO_THROW(store::RunLock c(dir));
}
