#pragma once

// Run directory persistence.
//
//   <runs>/<run_id>/
//     manifest.json            config snapshot, seed, cell list
//     status.jsonl             append-only cell status transitions
//     lock                     pid of the owning process (flock held)
//     traces/<cell>.jsonl      header line, one {"t","i","inj"} line per token, end line
//     traces/<cell>.jsonl.inprogress / .partial
//     answers/<cell>.json      checkpoint answers
//     analytics/, exports/

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlscale/model.hpp"
#include "mlscale/util.hpp"

namespace mlscale::store {

namespace fs = std::filesystem;

enum class CellStatus : std::uint8_t { pending, running, done, failed };

constexpr std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::pending: return "pending";
    case CellStatus::running: return "running";
    case CellStatus::done: return "done";
    case CellStatus::failed: return "failed";
  }
  return "pending";
}

inline CellStatus parse_cell_status(std::string_view s) {
  if (s == "pending") return CellStatus::pending;
  if (s == "running") return CellStatus::running;
  if (s == "done") return CellStatus::done;
  if (s == "failed") return CellStatus::failed;
  throw InputError("unknown cell status '" + std::string(s) + "'");
}

inline bool transition_allowed(CellStatus from, CellStatus to) {
  switch (from) {
    case CellStatus::pending: return to == CellStatus::running;
    case CellStatus::running: return to == CellStatus::done || to == CellStatus::failed;
    case CellStatus::failed: return to == CellStatus::pending;
    case CellStatus::done: return false;
  }
  return false;
}

struct CellKey {
  Language language = Language::en;
  QuestionRef question;
  std::int64_t sample_index = 0;

  // File-system safe identifier, also used as the trace id.
  std::string id() const {
    auto clean = [](std::string_view s) {
      std::string o;
      for (char c : s)
        o += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
      return o;
    };
    char idx[16];
    std::snprintf(idx, sizeof(idx), "%03lld", static_cast<long long>(sample_index));
    return std::string(to_string(language)) + "." + clean(question.dataset_id) + "." +
           clean(question.question_id) + ".s" + idx;
  }

  auto operator<=>(const CellKey&) const = default;
};

inline void to_json(json& j, const CellKey& c) {
  j = json{{"lang", c.language}, {"dataset_id", c.question.dataset_id},
           {"question_id", c.question.question_id}, {"sample_index", c.sample_index}};
}
inline void from_json(const json& j, CellKey& c) {
  j.at("lang").get_to(c.language);
  j.at("dataset_id").get_to(c.question.dataset_id);
  j.at("question_id").get_to(c.question.question_id);
  j.at("sample_index").get_to(c.sample_index);
}

struct RunManifest {
  std::string run_id;
  json config;
  std::uint64_t seed = 0;
  std::string created_at;
  std::vector<CellKey> cells;
};

// Exclusive ownership of a run directory for the lifetime of the object.
// The kernel drops the flock when the process dies, so a stale lock file
// left by a crash is taken over silently.
class RunLock {
 public:
  explicit RunLock(const fs::path& dir) {
    auto path = dir / "lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StoreError("cannot open " + path.string() + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      char buf[32] = {};
      auto n = ::pread(fd_, buf, sizeof(buf) - 1, 0);
      ::close(fd_);
      fd_ = -1;
      throw StoreError("run " + dir.string() + " is locked by pid " +
                       std::string(buf, n > 0 ? static_cast<std::size_t>(n) : 0));
    }
    auto pid = std::to_string(::getpid());
    if (::ftruncate(fd_, 0) != 0 || ::pwrite(fd_, pid.data(), pid.size(), 0) < 0) {
      ::close(fd_);
      fd_ = -1;
      throw StoreError("cannot write " + path.string());
    }
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;
  ~RunLock() {
    if (fd_ >= 0) ::close(fd_);
  }

 private:
  int fd_ = -1;
};

// Line-oriented append-only file; every line reaches the kernel before
// append() returns, fsync happens on sync().
class AppendFile {
 public:
  AppendFile() = default;
  explicit AppendFile(const fs::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StoreError("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  AppendFile(AppendFile&& o) noexcept : path_(std::move(o.path_)), fd_(o.fd_) { o.fd_ = -1; }
  AppendFile& operator=(AppendFile&& o) noexcept {
    if (this != &o) {
      close();
      path_ = std::move(o.path_);
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;
  ~AppendFile() { close(); }

  void append(std::string line) {
    line += '\n';
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
      auto n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw StoreError("write to " + path_.string() + " failed: " + std::strerror(errno));
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }

  void sync() {
    if (fd_ >= 0 && ::fsync(fd_) != 0)
      throw StoreError("fsync of " + path_.string() + " failed: " + std::strerror(errno));
  }

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  int fd_ = -1;
};

inline void write_file_atomic(const fs::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw StoreError("cannot write " + tmp.string() + ": " + std::strerror(errno));
  const char* p = content.data();
  std::size_t left = content.size();
  while (left > 0) {
    auto n = ::write(fd, p, left);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      ::close(fd);
      throw StoreError("write to " + tmp.string() + " failed: " + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StoreError("cannot rename " + tmp.string() + ": " + ec.message());
}

// Streams one trace to `<id>.jsonl.inprogress` and renames it into place on
// finish().
class TraceWriter {
 public:
  TraceWriter(const fs::path& final_path, const ReasoningTrace& header)
      : final_(final_path), temp_(fs::path(final_path.string() + ".inprogress")) {
    std::error_code ec;
    fs::remove(temp_, ec);
    file_ = AppendFile(temp_);
    json h = trace_header(header);
    h.erase("status");
    h.erase("injections");
    h.erase("failure");
    file_.append(json{{"header", h}}.dump());
  }

  void append(const TokenRecord& t) {
    json j = t;
    file_.append(j.dump());
  }

  void finish(const ReasoningTrace& trace) {
    file_.append(json{{"end", {{"status", std::string(to_string(trace.status))},
                               {"injections", trace.injections},
                               {"failure", trace.failure},
                               {"generated", trace.generated_count()}}}}
                     .dump());
    file_.sync();
    file_.close();
    std::error_code ec;
    fs::rename(temp_, final_, ec);
    if (ec) throw StoreError("cannot finalize " + final_.string() + ": " + ec.message());
  }

 private:
  fs::path final_;
  fs::path temp_;
  AppendFile file_;
};

// Parses a finished trace file. Any malformed or missing line raises a
// CorruptionError carrying its 1-based line number.
inline ReasoningTrace read_trace_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot open trace " + path.string());
  ReasoningTrace tr;
  std::string line;
  std::size_t no = 0;
  bool ended = false;
  std::int64_t expected_generated = -1;
  while (std::getline(in, line)) {
    ++no;
    if (ended) throw CorruptionError(path.string(), no, "content after the end record");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorruptionError(path.string(), no, std::string("malformed line: ") + e.what());
    }
    try {
      if (no == 1) {
        if (!j.contains("header")) throw InputError("first line is not a header");
        apply_trace_header(j.at("header"), tr);
      } else if (j.contains("end")) {
        const auto& e = j.at("end");
        tr.status = parse_trace_status(e.at("status").get<std::string>());
        tr.injections = e.at("injections").get<std::int64_t>();
        tr.failure = e.value("failure", std::string());
        expected_generated = e.at("generated").get<std::int64_t>();
        ended = true;
      } else {
        tr.tokens.push_back(j.get<TokenRecord>());
      }
    } catch (const CorruptionError&) {
      throw;
    } catch (const std::exception& e) {
      throw CorruptionError(path.string(), no, e.what());
    }
  }
  if (no == 0) throw CorruptionError(path.string(), 1, "empty trace file");
  if (!ended) throw CorruptionError(path.string(), no, "trace ends without an end record");
  if (static_cast<std::int64_t>(tr.generated_count()) != expected_generated)
    throw CorruptionError(path.string(), no, "generated-token count does not match the end record");
  try {
    tr.validate();
  } catch (const InputError& e) {
    throw CorruptionError(path.string(), no, e.what());
  }
  return tr;
}

class RunStore {
 public:
  // Creates the run directory, or opens it when it already exists with the
  // same configuration snapshot.
  static RunStore create(const fs::path& runs_dir, const std::string& run_id, const json& config,
                         std::uint64_t seed, const std::vector<CellKey>& cells) {
    if (run_id.empty()) throw ConfigError("run id must not be empty");
    auto dir = runs_dir / run_id;
    if (fs::exists(dir / "manifest.json")) {
      auto s = open(runs_dir, run_id);
      if (s.manifest_.config != config)
        throw ConfigError("run " + run_id + " already exists with a different configuration");
      return s;
    }
    fs::create_directories(dir / "traces");
    fs::create_directories(dir / "answers");
    fs::create_directories(dir / "analytics");
    fs::create_directories(dir / "exports");
    RunManifest m;
    m.run_id = run_id;
    m.config = config;
    m.seed = seed;
    m.created_at = util::utc_timestamp();
    m.cells = cells;
    json j{{"run_id", m.run_id}, {"seed", m.seed}, {"created_at", m.created_at},
           {"config", m.config}, {"cells", m.cells}};
    write_file_atomic(dir / "manifest.json", j.dump(1) + "\n");
    return open(runs_dir, run_id);
  }

  static RunStore open(const fs::path& runs_dir, const std::string& run_id) {
    auto dir = runs_dir / run_id;
    auto mpath = dir / "manifest.json";
    std::ifstream in(mpath, std::ios::binary);
    if (!in) throw StoreError("run " + run_id + " not found under " + runs_dir.string());
    RunStore s;
    s.dir_ = dir;
    try {
      auto j = json::parse(in);
      s.manifest_.run_id = j.at("run_id").get<std::string>();
      s.manifest_.seed = j.at("seed").get<std::uint64_t>();
      s.manifest_.created_at = j.at("created_at").get<std::string>();
      s.manifest_.config = j.at("config");
      s.manifest_.cells = j.at("cells").get<std::vector<CellKey>>();
    } catch (const std::exception& e) {
      throw CorruptionError(mpath.string(), 1, e.what());
    }
    for (std::size_t i = 0; i < s.manifest_.cells.size(); ++i) {
      auto id = s.manifest_.cells[i].id();
      s.index_[id] = i;
      s.status_[id] = CellStatus::pending;
    }
    s.replay_status_log();
    s.log_ = std::make_unique<AppendFile>(dir / "status.jsonl");
    return s;
  }

  RunStore(RunStore&&) = default;
  RunStore& operator=(RunStore&&) = default;

  const fs::path& dir() const { return dir_; }
  const RunManifest& manifest() const { return manifest_; }
  fs::path analytics_dir() const { return dir_ / "analytics"; }
  fs::path exports_dir() const { return dir_ / "exports"; }
  fs::path trace_path(const std::string& id) const { return dir_ / "traces" / (id + ".jsonl"); }
  fs::path answers_path(const std::string& id) const { return dir_ / "answers" / (id + ".json"); }

  CellStatus status(const std::string& id) const {
    std::lock_guard lk(*mu_);
    auto it = status_.find(id);
    if (it == status_.end()) throw InputError("unknown cell " + id);
    return it->second;
  }

  void set_status(const std::string& id, CellStatus to, const std::string& note = {}) {
    std::lock_guard lk(*mu_);
    auto it = status_.find(id);
    if (it == status_.end()) throw InputError("unknown cell " + id);
    if (!transition_allowed(it->second, to))
      throw StoreError("cell " + id + ": illegal transition " + std::string(to_string(it->second)) +
                       " -> " + std::string(to_string(to)));
    write_status(id, to, note);
    it->second = to;
  }

  std::vector<CellKey> cells_with(CellStatus s) const {
    std::lock_guard lk(*mu_);
    std::vector<CellKey> out;
    for (const auto& c : manifest_.cells)
      if (status_.at(c.id()) == s) out.push_back(c);
    return out;
  }

  std::map<CellStatus, std::size_t> status_counts() const {
    std::lock_guard lk(*mu_);
    std::map<CellStatus, std::size_t> out;
    for (const auto& [_, s] : status_) ++out[s];
    return out;
  }

  // Cells left running by a crashed process go back to pending; their
  // unfinished trace files are kept with a `.partial` suffix. Returns the
  // recovered cell ids.
  std::vector<std::string> recover() {
    std::vector<std::string> recovered;
    std::lock_guard lk(*mu_);
    for (const auto& c : manifest_.cells) {
      auto id = c.id();
      if (status_[id] != CellStatus::running) continue;
      auto inprogress = fs::path(trace_path(id).string() + ".inprogress");
      std::error_code ec;
      if (fs::exists(inprogress)) fs::rename(inprogress, fs::path(trace_path(id).string() + ".partial"), ec);
      if (ec) throw StoreError("cannot preserve partial trace for " + id + ": " + ec.message());
      fs::remove(trace_path(id), ec);
      fs::remove(answers_path(id), ec);
      write_status(id, CellStatus::pending, "recovered after interruption");
      status_[id] = CellStatus::pending;
      recovered.push_back(id);
    }
    return recovered;
  }

  TraceWriter open_trace(const ReasoningTrace& header) {
    return TraceWriter(trace_path(header.trace_id), header);
  }

  bool has_trace(const std::string& id) const { return fs::exists(trace_path(id)); }

  ReasoningTrace read_trace(const std::string& id) const { return read_trace_file(trace_path(id)); }

  void write_answers(const std::string& id, const std::vector<CheckpointAnswer>& answers) {
    write_file_atomic(answers_path(id), json{{"trace_id", id}, {"answers", answers}}.dump() + "\n");
  }

  std::optional<std::vector<CheckpointAnswer>> read_answers(const std::string& id) const {
    auto path = answers_path(id);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
      return json::parse(in).at("answers").get<std::vector<CheckpointAnswer>>();
    } catch (const std::exception& e) {
      throw CorruptionError(path.string(), 1, e.what());
    }
  }

 private:
  RunStore() : mu_(std::make_unique<std::mutex>()) {}

  void write_status(const std::string& id, CellStatus to, const std::string& note) {
    json j{{"cell", id}, {"status", to_string(to)}};
    if (!note.empty()) j["note"] = note;
    log_->append(j.dump());
  }

  // A torn final line (the writer died mid-append) is ignored and cut off;
  // a malformed line anywhere else is corruption.
  void replay_status_log() {
    auto path = dir_ / "status.jsonl";
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    std::size_t no = 0;
    std::size_t good_end = 0;
    while (pos < content.size()) {
      auto nl = content.find('\n', pos);
      ++no;
      if (nl == std::string::npos) break;
      auto line = std::string_view(content).substr(pos, nl - pos);
      try {
        auto j = json::parse(line);
        auto id = j.at("cell").get<std::string>();
        auto it = status_.find(id);
        if (it == status_.end()) throw InputError("unknown cell " + id);
        it->second = parse_cell_status(j.at("status").get<std::string>());
      } catch (const std::exception& e) {
        throw CorruptionError(path.string(), no, e.what());
      }
      pos = nl + 1;
      good_end = pos;
    }
    if (good_end < content.size()) fs::resize_file(path, good_end);
  }

  fs::path dir_;
  RunManifest manifest_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, CellStatus> status_;
  std::unique_ptr<AppendFile> log_;
  std::unique_ptr<std::mutex> mu_;
};

}  // namespace mlscale::store
