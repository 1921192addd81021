#pragma once

// Command-line front end. Every command reads and writes through the run
// store; machine outputs go to files, progress goes to standard error.
//
// Exit codes: 0 success, 1 partial completion, 2 configuration error.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlscale/config.hpp"
#include "mlscale/corpus.hpp"
#include "mlscale/fidelity.hpp"
#include "mlscale/gateway.hpp"
#include "mlscale/http.hpp"
#include "mlscale/langid.hpp"
#include "mlscale/mittx.hpp"
#include "mlscale/mock.hpp"
#include "mlscale/scaler.hpp"
#include "mlscale/simil.hpp"
#include "mlscale/store.hpp"

namespace mlscale::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kSuccess = 0, kPartial = 1, kConfigError = 2 };

struct Options {
  std::string config_path;
  std::string run_id;
  std::string languages;
  std::string limits;
  std::string strategy = "e3";
  std::string endpoint;
  std::string mock_script;
  std::string group = "language";
  std::string runs_dir;
  std::string host = "127.0.0.1";
  int port = 8000;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
};

inline void log(const std::string& msg) {
  static std::mutex mu;
  std::lock_guard lk(mu);
  std::cerr << msg << '\n';
  std::cerr.flush();
}

// ---- CSV ----------------------------------------------------------------------

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) body_ += ',';
      body_ += csv_field(fields[i]);
    }
    body_ += '\n';
  }

  void write(const fs::path& path) const {
    fs::create_directories(path.parent_path());
    store::write_file_atomic(path, body_);
  }

  const std::string& str() const { return body_; }

 private:
  std::string body_;
};

inline std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
        else if (c == '"') quoted = false;
        else cur += c;
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(std::move(cur));
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline std::string fmt(double v) { return util::format_double(v); }
inline std::string fmt(const std::optional<double>& v) { return v ? util::format_double(*v) : ""; }

// ---- argument helpers ---------------------------------------------------------

inline std::vector<Language> parse_language_list(const std::string& csv) {
  std::vector<Language> out;
  for (auto& part : util::split(csv, ',')) {
    auto code = std::string(util::trim(part));
    if (code.empty()) continue;
    auto l = parse_language(code);
    if (!l || *l == Language::other) throw ConfigError("unknown language '" + code + "'");
    if (std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
  }
  if (out.empty()) throw ConfigError("--languages needs at least one language");
  return out;
}

inline std::vector<std::int64_t> parse_limit_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  for (auto& part : util::split(csv, ',')) {
    auto s = util::trim(part);
    if (s.empty()) continue;
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 0)
      throw ConfigError("bad limit '" + std::string(s) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--limits needs at least one value");
  return out;
}

// ---- runtime wiring -------------------------------------------------------------

inline std::unique_ptr<gateway::CompletionClient> make_completion_client(const config::ServiceConfig& s) {
  if (s.kind == "mock")
    return std::make_unique<mock::ScriptedCompletionClient>(mock::load_script(s.script),
                                                            s.model.empty() ? "mock-model" : s.model);
  gateway::EndpointConfig e;
  e.url = s.url;
  e.model = s.model;
  e.api_key = s.api_key;
  e.timeout_seconds = static_cast<int>(s.timeout_seconds);
  return std::make_unique<gateway::HttpCompletionClient>(e);
}

inline std::shared_ptr<gateway::Embedder> make_embedder(const config::ServiceConfig& s) {
  std::shared_ptr<gateway::Embedder> inner;
  if (s.kind == "http") {
    gateway::EndpointConfig e{s.url, s.model, s.api_key, static_cast<int>(s.timeout_seconds), {}};
    inner = std::make_shared<gateway::HttpEmbedder>(e);
  } else {
    inner = std::make_shared<gateway::MockEmbedder>(s.dimension, s.model.empty() ? "mock-embed" : s.model);
  }
  return std::make_shared<gateway::EmbeddingCache>(inner);
}

inline std::shared_ptr<gateway::Translator> make_translator(const config::ServiceConfig& s) {
  std::shared_ptr<gateway::Translator> inner;
  if (s.kind == "http") {
    gateway::EndpointConfig e{s.url, s.model, s.api_key, static_cast<int>(s.timeout_seconds), {}};
    inner = std::make_shared<gateway::HttpTranslator>(e);
  } else {
    inner = std::make_shared<gateway::IdentityTranslator>();
  }
  return std::make_shared<gateway::TranslationCache>(inner);
}

inline std::string derived_run_id(const json& snap) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "run-%012llx",
                static_cast<unsigned long long>(util::fnv1a64(snap.dump()) & 0xFFFFFFFFFFFFULL));
  return buf;
}

// Resolves the configuration for a command: --config when given, else the
// snapshot of an existing --run, then command-line overrides.
inline config::RunConfig resolve_config(const Options& o, bool needs_run) {
  config::RunConfig cfg;
  if (!o.config_path.empty()) {
    cfg = config::load_config(o.config_path);
  } else {
    config::apply_environment(cfg);
  }
  if (!o.runs_dir.empty()) cfg.runs_dir = o.runs_dir;
  if (!o.run_id.empty()) cfg.run_id = o.run_id;
  if (o.config_path.empty()) {
    if (cfg.run_id.empty()) throw ConfigError("either --config or --run is required");
    auto mpath = cfg.runs_dir / cfg.run_id / "manifest.json";
    std::ifstream in(mpath);
    if (!in) throw ConfigError("run " + cfg.run_id + " not found under " + cfg.runs_dir.string());
    json m;
    try {
      m = json::parse(in);
    } catch (const json::parse_error& e) {
      throw CorruptionError(mpath.string(), 1, e.what());
    }
    cfg = config::from_snapshot(m.at("config"), cfg);
  }
  if (!o.languages.empty()) cfg.languages = parse_language_list(o.languages);
  if (o.samples) cfg.samples = *o.samples;
  if (o.seed) cfg.seed = *o.seed;
  if (o.parallelism) cfg.parallelism = *o.parallelism;
  if (!o.endpoint.empty()) {
    cfg.completion.kind = "http";
    cfg.completion.url = o.endpoint;
  }
  if (!o.mock_script.empty()) {
    cfg.completion.kind = "mock";
    cfg.completion.script = o.mock_script;
  }
  if (cfg.run_id.empty() && !needs_run) cfg.run_id = derived_run_id(config::snapshot(cfg));
  if (needs_run && cfg.run_id.empty()) throw ConfigError("--run is required");
  cfg.validate();
  return cfg;
}

inline std::vector<Language> canonical_order(const std::vector<Language>& langs) {
  std::vector<Language> out;
  for (auto l : kStudyLanguages)
    if (std::find(langs.begin(), langs.end(), l) != langs.end()) out.push_back(l);
  return out;
}

inline std::vector<store::CellKey> enumerate_cells(const config::RunConfig& cfg,
                                                   const corpus::DatasetManifest& ds) {
  std::vector<store::CellKey> cells;
  for (auto l : canonical_order(cfg.languages))
    for (const auto& q : ds.for_language(l))
      for (std::int64_t s = 0; s < cfg.samples; ++s) cells.push_back({l, q.ref(), s});
  return cells;
}

inline std::uint64_t cell_seed(std::uint64_t run_seed, const std::string& cell_id) {
  std::uint64_t state = util::fnv1a64(cell_id) ^ run_seed;
  return util::splitmix64(state);
}

struct RunContext {
  config::RunConfig cfg;
  corpus::DatasetManifest dataset;
  corpus::PromptCatalog catalog;
  std::map<std::pair<Language, QuestionRef>, Question> questions;

  const Question& question(Language l, const QuestionRef& q) const {
    auto it = questions.find({l, q});
    if (it == questions.end())
      throw InputError("question " + q.key() + " has no " + std::string(to_string(l)) + " text");
    return it->second;
  }
};

inline RunContext load_context(const config::RunConfig& cfg) {
  RunContext ctx;
  ctx.cfg = cfg;
  ctx.dataset = corpus::load_dataset(cfg.dataset);
  ctx.catalog = corpus::load_prompts(cfg.prompts);
  ctx.catalog.require(cfg.languages);
  for (auto l : cfg.languages) {
    if (std::find(ctx.dataset.languages.begin(), ctx.dataset.languages.end(), l) ==
        ctx.dataset.languages.end())
      throw ConfigError("dataset has no " + std::string(to_string(l)) + " texts");
    for (const auto& q : ctx.dataset.for_language(l)) ctx.questions.emplace(std::pair{l, q.ref()}, q);
  }
  return ctx;
}

// ---- run-scaling / extract-answers --------------------------------------------------

struct CellOutcome {
  bool ok = false;
  std::string note;
};

inline CellOutcome extract_cell(store::RunStore& rs, const RunContext& ctx, const store::CellKey& cell,
                                const ReasoningTrace& trace, gateway::CompletionClient& client) {
  const auto& q = ctx.question(cell.language, cell.question);
  auto bundle = scaler::build_prompt(ctx.catalog, q);
  auto answers = scaler::extract_all(trace, bundle, client, ctx.cfg.policy, q.gold_answer);
  rs.write_answers(cell.id(), answers);
  return {true, {}};
}

inline CellOutcome run_cell(store::RunStore& rs, const RunContext& ctx, const store::CellKey& cell,
                            gateway::CompletionClient& client) {
  const auto id = cell.id();
  rs.set_status(id, store::CellStatus::running);
  try {
    const auto& q = ctx.question(cell.language, cell.question);
    auto bundle = scaler::build_prompt(ctx.catalog, q);

    ReasoningTrace header;
    header.trace_id = id;
    header.language = cell.language;
    header.question = cell.question;
    header.sample_index = cell.sample_index;
    header.budget = ctx.cfg.policy.budget;
    header.model_id = client.model_id();
    header.created_at = util::utc_timestamp();
    header.prompt = bundle.prompt_text();
    auto writer = rs.open_trace(header);

    scaler::TraceOptions opts{id, cell.question, cell.sample_index,
                              cell_seed(rs.manifest().seed, id)};
    auto trace = scaler::run_trace(bundle, ctx.cfg.policy, client, opts,
                                   [&](const TokenRecord& t) { writer.append(t); });
    writer.finish(trace);
    if (trace.status == TraceStatus::partial) {
      rs.set_status(id, store::CellStatus::failed, trace.failure);
      return {false, trace.failure};
    }
    if (ctx.cfg.extract) extract_cell(rs, ctx, cell, trace, client);
    rs.set_status(id, store::CellStatus::done);
    return {true, {}};
  } catch (const Error& e) {
    rs.set_status(id, store::CellStatus::failed, e.what());
    return {false, e.what()};
  }
}

class Progress {
 public:
  Progress(std::string what, std::size_t total) : what_(std::move(what)), total_(total) {}
  void tick() {
    auto n = ++done_;
    auto step = std::max<std::size_t>(1, total_ / 20);
    if (n % step == 0 || n == total_)
      log(what_ + ": " + std::to_string(n) + "/" + std::to_string(total_));
  }

 private:
  std::string what_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
};

inline int cmd_run_scaling(const Options& o) {
  auto cfg = resolve_config(o, false);
  auto ctx = load_context(cfg);
  auto cells = enumerate_cells(cfg, ctx.dataset);
  if (cells.empty()) throw ConfigError("nothing to run: the dataset has no questions for these languages");
  fs::create_directories(cfg.runs_dir / cfg.run_id);
  store::RunLock lock(cfg.runs_dir / cfg.run_id);
  auto rs = store::RunStore::create(cfg.runs_dir, cfg.run_id, config::snapshot(cfg), cfg.seed, cells);

  for (const auto& id : rs.recover()) log("recovered interrupted cell " + id);
  for (const auto& c : rs.cells_with(store::CellStatus::failed)) {
    rs.set_status(c.id(), store::CellStatus::pending, "retry");
    log("retrying failed cell " + c.id());
  }
  auto pending = rs.cells_with(store::CellStatus::pending);
  auto done_before = rs.cells_with(store::CellStatus::done).size();
  if (done_before) log("skipping " + std::to_string(done_before) + " done cells");
  log("run " + cfg.run_id + ": " + std::to_string(pending.size()) + " cells to generate");

  auto client = make_completion_client(cfg.completion);
  Progress progress("cells", pending.size());
  std::atomic<std::size_t> failures{0};
  util::parallel_for(pending.size(), cfg.parallelism, [&](std::size_t i) {
    auto out = run_cell(rs, ctx, pending[i], *client);
    if (!out.ok) {
      ++failures;
      log("cell " + pending[i].id() + " failed: " + out.note);
    }
    progress.tick();
  });

  auto counts = rs.status_counts();
  log("run " + cfg.run_id + ": " + std::to_string(counts[store::CellStatus::done]) + " done, " +
      std::to_string(counts[store::CellStatus::failed]) + " failed");
  std::cout << cfg.run_id << '\n';
  return counts[store::CellStatus::done] == cells.size() ? kSuccess : kPartial;
}

struct OpenRun {
  config::RunConfig cfg;
  RunContext ctx;
  store::RunStore rs;
};

inline OpenRun open_run(const Options& o) {
  auto cfg = resolve_config(o, true);
  auto rs = store::RunStore::open(cfg.runs_dir, cfg.run_id);
  auto snap_cfg = config::from_snapshot(rs.manifest().config, cfg);
  auto ctx = load_context(snap_cfg);
  return {snap_cfg, std::move(ctx), std::move(rs)};
}

struct Skipped {
  std::string id;
  std::string why;
};

inline void report_skips(const std::vector<Skipped>& skipped, std::size_t shown = 10) {
  for (std::size_t i = 0; i < std::min(shown, skipped.size()); ++i)
    log("skipped " + skipped[i].id + ": " + skipped[i].why);
  if (skipped.size() > shown) log("skipped " + std::to_string(skipped.size() - shown) + " more");
}

// Done cells in manifest order.
inline std::vector<store::CellKey> done_cells(const store::RunStore& rs) {
  return rs.cells_with(store::CellStatus::done);
}

inline int cmd_extract_answers(const Options& o) {
  auto run = open_run(o);
  store::RunLock lock(run.rs.dir());
  auto client = make_completion_client(run.cfg.completion);
  std::vector<store::CellKey> todo;
  for (const auto& c : done_cells(run.rs))
    if (!fs::exists(run.rs.answers_path(c.id()))) todo.push_back(c);
  log("extracting answers for " + std::to_string(todo.size()) + " traces");
  std::vector<Skipped> skipped;
  std::mutex mu;
  Progress progress("traces", todo.size());
  util::parallel_for(todo.size(), run.cfg.parallelism, [&](std::size_t i) {
    try {
      auto trace = run.rs.read_trace(todo[i].id());
      extract_cell(run.rs, run.ctx, todo[i], trace, *client);
    } catch (const Error& e) {
      std::lock_guard lk(mu);
      skipped.push_back({todo[i].id(), e.what()});
    }
    progress.tick();
  });
  report_skips(skipped);
  return skipped.empty() ? kSuccess : kPartial;
}

// ---- curve ----------------------------------------------------------------------------

inline int cmd_curve(const Options& o) {
  auto run = open_run(o);
  scaler::Grouping grouping;
  if (o.group == "language") grouping = scaler::Grouping::per_language;
  else if (o.group == "resource-class") grouping = scaler::Grouping::per_resource_class;
  else throw ConfigError("--group must be language or resource-class");
  std::optional<std::vector<std::int64_t>> limits;
  if (!o.limits.empty()) limits = parse_limit_list(o.limits);

  std::vector<scaler::ScoredTrace> scored;
  std::vector<Skipped> skipped;
  for (const auto& c : done_cells(run.rs)) {
    try {
      auto answers = run.rs.read_answers(c.id());
      if (!answers) {
        skipped.push_back({c.id(), "no checkpoint answers (run extract-answers)"});
        continue;
      }
      scored.push_back({c.language, c.question, c.sample_index, std::move(*answers)});
    } catch (const Error& e) {
      skipped.push_back({c.id(), e.what()});
    }
  }
  auto curves = scaler::scaling_curve(scored, grouping, limits);

  auto path = run.rs.analytics_dir() / ("curve_" + o.group + ".csv");
  if (limits) {
    std::vector<std::string> header{"group"};
    for (auto l : *limits) header.push_back(std::to_string(l));
    CsvWriter csv(header);
    for (const auto& c : curves) {
      std::vector<std::string> row{c.label};
      for (auto l : *limits) {
        auto it = std::find_if(c.points.begin(), c.points.end(),
                               [&](const auto& p) { return p.reasoning_tokens == l; });
        row.push_back(it == c.points.end() ? "" : fmt(it->accuracy));
      }
      csv.row(row);
    }
    csv.write(path);
  } else {
    CsvWriter csv({"group", "reasoning_tokens", "accuracy", "n"});
    for (const auto& c : curves)
      for (const auto& p : c.points)
        csv.row({c.label, std::to_string(p.reasoning_tokens), fmt(p.accuracy), std::to_string(p.n)});
    csv.write(path);
  }
  report_skips(skipped);
  log("wrote " + path.string());
  return skipped.empty() ? kSuccess : kPartial;
}

// ---- fidelity -------------------------------------------------------------------------

inline int cmd_fidelity(const Options& o) {
  auto run = open_run(o);
  auto cells = done_cells(run.rs);
  auto identifier = langid::default_identifier();
  std::vector<std::optional<fidelity::LanguageTrace>> results(cells.size());
  std::vector<std::string> errors(cells.size());
  Progress progress("traces", cells.size());
  util::parallel_for(cells.size(), run.cfg.parallelism, [&](std::size_t i) {
    try {
      results[i] = fidelity::analyze(run.rs.read_trace(cells[i].id()), *identifier);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
    progress.tick();
  });

  std::vector<std::string> header{"trace_id", "language", "question_id", "sample_index"};
  for (int b = 0; b < 20; ++b) header.push_back("bin" + std::to_string(b));
  CsvWriter majority(header);
  header.resize(2);
  header[0] = "language";
  header[1] = "traces";
  header.push_back("mean");
  for (int b = 0; b < 100; ++b) header.push_back("bin" + std::to_string(b));
  CsvWriter scores(header);

  std::vector<Skipped> skipped;
  std::map<Language, std::pair<std::vector<double>, std::size_t>> sums;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!results[i]) {
      skipped.push_back({cells[i].id(), errors[i]});
      continue;
    }
    const auto& lt = *results[i];
    std::vector<std::string> row{lt.trace_ref, std::string(to_string(cells[i].language)),
                                 cells[i].question.key(), std::to_string(cells[i].sample_index)};
    for (auto l : lt.majority_bins) row.emplace_back(to_string(l));
    majority.row(row);
    auto& [sum, n] = sums[cells[i].language];
    sum.resize(lt.fidelity_bins.size(), 0.0);
    for (std::size_t b = 0; b < lt.fidelity_bins.size(); ++b) sum[b] += lt.fidelity_bins[b];
    ++n;
  }
  for (const auto& [lang, sn] : sums) {
    const auto& [sum, n] = sn;
    std::vector<std::string> row{std::string(to_string(lang)), std::to_string(n)};
    double total = 0.0;
    std::vector<std::string> bins;
    for (double s : sum) {
      total += s / static_cast<double>(n);
      bins.push_back(fmt(s / static_cast<double>(n)));
    }
    row.push_back(fmt(total / static_cast<double>(sum.size())));
    row.insert(row.end(), bins.begin(), bins.end());
    scores.row(row);
  }
  majority.write(run.rs.analytics_dir() / "fidelity_majority.csv");
  scores.write(run.rs.analytics_dir() / "fidelity_scores.csv");
  report_skips(skipped);
  log("wrote fidelity_majority.csv and fidelity_scores.csv under " + run.rs.analytics_dir().string());
  return skipped.empty() ? kSuccess : kPartial;
}

// ---- similarity ---------------------------------------------------------------------

inline int cmd_similarity(const Options& o) {
  auto run = open_run(o);
  auto multilingual = make_embedder(run.cfg.embedder);
  auto monolingual = make_embedder(run.cfg.monolingual_embedder);
  auto translator = make_translator(run.cfg.translator);

  std::map<std::tuple<QuestionRef, std::int64_t>, store::CellKey> english;
  std::vector<store::CellKey> others;
  for (const auto& c : done_cells(run.rs)) {
    if (c.language == Language::en) english.emplace(std::tuple{c.question, c.sample_index}, c);
    else others.push_back(c);
  }
  if (english.empty()) throw ConfigError("similarity needs English traces in the run");

  struct Item {
    store::CellKey cell;
    std::vector<simil::SimilaritySeries> series;
    std::string error;
  };
  std::vector<Item> items;
  for (const auto& c : others)
    if (english.count({c.question, c.sample_index})) items.push_back({c, {}, {}});

  Progress progress("pairs", items.size());
  util::parallel_for(items.size(), run.cfg.parallelism, [&](std::size_t i) {
    auto& it = items[i];
    try {
      auto en_cell = english.at({it.cell.question, it.cell.sample_index});
      auto seg_l = simil::incremental_segments(run.rs.read_trace(it.cell.id()));
      auto seg_en = simil::incremental_segments(run.rs.read_trace(en_cell.id()));
      auto n = std::min(seg_l.size(), seg_en.size());
      seg_l.resize(n);
      seg_en.resize(n);
      it.series.push_back(simil::similarity_to_english(seg_l, seg_en, it.cell.language,
                                                       simil::Pathway::multilingual_embed,
                                                       *multilingual, nullptr));
      it.series.push_back(simil::similarity_to_english(seg_l, seg_en, it.cell.language,
                                                       simil::Pathway::translate_then_embed,
                                                       *monolingual, translator.get()));
    } catch (const Error& e) {
      it.error = e.what();
    }
    progress.tick();
  });

  CsvWriter series({"language", "pathway", "question_id", "sample_index", "k", "cosine"});
  std::map<std::tuple<Language, simil::Pathway, std::int64_t>, std::pair<double, std::size_t>> acc;
  std::vector<Skipped> skipped;
  std::size_t missing = 0;
  for (const auto& it : items) {
    if (!it.error.empty()) {
      skipped.push_back({it.cell.id(), it.error});
      continue;
    }
    for (const auto& s : it.series) {
      missing += s.missing();
      for (const auto& p : s.points) {
        series.row({std::string(to_string(s.language)), std::string(simil::to_string(s.pathway)),
                    it.cell.question.key(), std::to_string(it.cell.sample_index),
                    std::to_string(p.k), fmt(p.cosine)});
        if (p.cosine) {
          auto& a = acc[{s.language, s.pathway, p.k}];
          a.first += *p.cosine;
          ++a.second;
        }
      }
    }
  }
  CsvWriter mean({"language", "pathway", "k", "mean", "n", "smoothed"});
  std::map<std::pair<Language, simil::Pathway>, std::vector<std::pair<std::int64_t, double>>> grouped;
  for (const auto& [key, a] : acc)
    grouped[{std::get<0>(key), std::get<1>(key)}].emplace_back(std::get<2>(key),
                                                                a.first / static_cast<double>(a.second));
  for (const auto& [key, pts] : grouped) {
    std::vector<double> values;
    for (const auto& p : pts) values.push_back(p.second);
    std::vector<double> smooth;
    if (values.size() >= 5) smooth = simil::rolling_average(values, 5);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& a = acc.at({key.first, key.second, pts[i].first});
      mean.row({std::string(to_string(key.first)), std::string(simil::to_string(key.second)),
                std::to_string(pts[i].first), fmt(pts[i].second), std::to_string(a.second),
                i < smooth.size() ? fmt(smooth[i]) : ""});
    }
  }
  series.write(run.rs.analytics_dir() / "similarity_series.csv");
  mean.write(run.rs.analytics_dir() / "similarity_mean.csv");
  report_skips(skipped);
  if (missing) log(std::to_string(missing) + " similarity points missing after gateway failures");
  log("wrote similarity_series.csv and similarity_mean.csv under " + run.rs.analytics_dir().string());
  return skipped.empty() && missing == 0 ? kSuccess : kPartial;
}

// ---- prefixes: consistency and export ------------------------------------------------------

struct LoadedPrefixes {
  std::vector<ReasoningTrace> traces;  // truncated to the prefix window
  std::vector<Skipped> skipped;
};

inline LoadedPrefixes load_prefix_traces(const OpenRun& run) {
  auto cells = done_cells(run.rs);
  std::vector<std::optional<ReasoningTrace>> loaded(cells.size());
  std::vector<std::string> errors(cells.size());
  const auto keep = run.cfg.prefix_tokens;
  util::parallel_for(cells.size(), run.cfg.parallelism, [&](std::size_t i) {
    try {
      auto t = run.rs.read_trace(cells[i].id());
      std::size_t seen = 0;
      std::size_t cut = 0;
      while (cut < t.tokens.size() && seen < keep) seen += t.tokens[cut++].injected ? 0 : 1;
      t.tokens.resize(cut);
      loaded[i] = std::move(t);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  LoadedPrefixes out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (loaded[i]) out.traces.push_back(std::move(*loaded[i]));
    else out.skipped.push_back({cells[i].id(), errors[i]});
  }
  return out;
}

inline std::vector<QuestionRef> question_refs(const corpus::DatasetManifest& ds) {
  std::vector<QuestionRef> out;
  std::set<QuestionRef> seen;
  for (const auto& q : ds.questions)
    if (seen.insert(q.ref()).second) out.push_back(q.ref());
  return out;
}

inline void write_deficits(const fs::path& path, const std::vector<mittx::Deficit>& deficits) {
  CsvWriter csv({"language", "question_id", "available", "required"});
  for (const auto& d : deficits)
    csv.row({std::string(to_string(d.language)), d.question.key(), std::to_string(d.available),
             std::to_string(d.required)});
  csv.write(path);
}

inline int cmd_consistency(const Options& o) {
  auto run = open_run(o);
  auto loaded = load_prefix_traces(run);
  auto langs = canonical_order(run.cfg.languages);
  auto collection = mittx::collect_prefixes(loaded.traces, langs, question_refs(run.ctx.dataset),
                                            run.cfg.prefix_samples, run.cfg.prefix_tokens);
  simil::PrefixSets sets;
  for (const auto& p : collection.prefixes) sets[p.language][p.question.key()].push_back(p.text);

  auto embedder = make_embedder(run.cfg.monolingual_embedder);
  auto translator = make_translator(run.cfg.translator);
  auto embedded = simil::embed_prefixes(sets, *embedder, *translator, run.cfg.parallelism);

  CsvWriter intra({"language", "question_id", "score", "prefixes"});
  auto scores = simil::intra_scores(embedded);
  for (auto l : langs) {
    if (!scores.count(l)) continue;
    for (const auto& [key, score] : scores.at(l))
      intra.row({std::string(to_string(l)), key, fmt(score),
                 std::to_string(embedded.vectors.at(l).at(key).size())});
  }
  auto matrix = simil::inter_consistency(embedded);
  std::vector<std::string> header{"language"};
  for (auto l : matrix.languages) header.emplace_back(to_string(l));
  CsvWriter inter(header);
  for (std::size_t i = 0; i < matrix.languages.size(); ++i) {
    std::vector<std::string> row{std::string(to_string(matrix.languages[i]))};
    for (std::size_t j = 0; j < matrix.languages.size(); ++j) row.push_back(fmt(matrix.at(i, j)));
    inter.row(row);
  }
  intra.write(run.rs.analytics_dir() / "consistency_intra.csv");
  inter.write(run.rs.analytics_dir() / "consistency_matrix.csv");
  write_deficits(run.rs.analytics_dir() / "prefix_deficits.csv", collection.deficits);
  report_skips(loaded.skipped);
  if (embedded.failed) log(std::to_string(embedded.failed) + " prefixes dropped after gateway failures");
  if (!collection.deficits.empty())
    log(std::to_string(collection.deficits.size()) + " (language, question) cells short of " +
        std::to_string(run.cfg.prefix_samples) + " prefixes");
  log("wrote consistency_intra.csv and consistency_matrix.csv under " + run.rs.analytics_dir().string());
  bool complete = loaded.skipped.empty() && embedded.failed == 0 && collection.deficits.empty();
  return complete ? kSuccess : kPartial;
}

inline int cmd_export_prefixes(const Options& o) {
  auto run = open_run(o);
  auto strategy = mittx::parse_strategy(o.strategy);
  auto loaded = load_prefix_traces(run);
  auto langs = canonical_order(run.cfg.languages);
  auto collection = mittx::collect_prefixes(loaded.traces, langs, question_refs(run.ctx.dataset),
                                            run.cfg.prefix_samples, run.cfg.prefix_tokens);

  {
    std::string all;
    for (const auto& p : collection.prefixes)
      all += mittx::record_line({p.text, p.language, p.question.key(), p.sample_index}) + "\n";
    fs::create_directories(run.rs.exports_dir());
    store::write_file_atomic(run.rs.exports_dir() / "prefixes.jsonl", all);
  }
  write_deficits(run.rs.exports_dir() / "prefix_deficits.csv", collection.deficits);

  auto set = mittx::assemble(strategy, collection.prefixes, o.seed, {run.cfg.run_id});
  std::string name = strategy == mittx::Strategy::E3 ? "mitt_e3.jsonl" : "mitt_h1.jsonl";
  auto path = run.rs.exports_dir() / name;
  auto manifest = mittx::export_training_set(set, path);
  report_skips(loaded.skipped);
  log(std::to_string(collection.prefixes.size()) + " prefixes collected; " +
      std::to_string(set.records.size()) + " " + std::string(mittx::to_string(strategy)) +
      " records written to " + path.string() + " (manifest " + manifest.filename().string() + ")");
  if (!collection.deficits.empty())
    log(std::to_string(collection.deficits.size()) + " (language, question) cells short of " +
        std::to_string(run.cfg.prefix_samples) + " prefixes, see prefix_deficits.csv");
  return loaded.skipped.empty() && collection.deficits.empty() ? kSuccess : kPartial;
}

// ---- mock-serve -------------------------------------------------------------------------

inline int cmd_mock_serve(const Options& o) {
  auto script = o.mock_script.empty() ? mock::MockScript::with_catalog_defaults()
                                      : mock::load_script(o.mock_script);
  mock::MockServer server(std::move(script));
  log("mock endpoint listening on http://" + o.host + ":" + std::to_string(o.port));
  server.serve(o.host, o.port);
  return kSuccess;
}

// ---- report ---------------------------------------------------------------------------

inline int cmd_report(const Options& o) {
  auto run = open_run(o);
  std::ostringstream out;
  out << "run " << run.cfg.run_id << "\n\n";
  auto counts = run.rs.status_counts();
  out << "cells\n";
  for (auto s : {store::CellStatus::done, store::CellStatus::failed, store::CellStatus::pending,
                 store::CellStatus::running})
    out << "  " << to_string(s) << ": " << counts[s] << "\n";

  auto section = [&](const std::string& title, const fs::path& file, auto&& body) {
    out << "\n" << title << "\n";
    if (!fs::exists(file)) {
      out << "  (not computed)\n";
      return;
    }
    auto rows = read_csv(file);
    if (rows.size() <= 1) {
      out << "  none\n";
      return;
    }
    body(rows);
  };
  const auto dir = run.rs.analytics_dir();
  section("deficits", dir / "prefix_deficits.csv", [&](const auto& rows) {
    const std::size_t shown = 20;
    for (std::size_t i = 1; i < std::min(rows.size(), shown + 1); ++i)
      out << "  " << rows[i][0] << " " << rows[i][1] << ": " << rows[i][2] << "/" << rows[i][3] << "\n";
    if (rows.size() > shown + 1) out << "  ... " << rows.size() - 1 - shown << " more in prefix_deficits.csv\n";
  });
  section("fidelity (mean success score)", dir / "fidelity_scores.csv", [&](const auto& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      out << "  " << rows[i][0] << ": " << rows[i][2] << " over " << rows[i][1] << " traces\n";
  });
  section("intra-language consistency", dir / "consistency_matrix.csv", [&](const auto& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      out << "  " << rows[i][0] << ": " << (i < rows[i].size() && !rows[i][i].empty() ? rows[i][i] : "missing")
          << "\n";
  });
  section("scaling curve", dir / "curve_language.csv", [&](const auto& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      out << " ";
      for (const auto& f : rows[i]) out << " " << f;
      out << "\n";
    }
  });
  auto text = out.str();
  store::write_file_atomic(dir / "report.txt", text);
  std::cout << text;
  return kSuccess;
}

// ---- dispatch -------------------------------------------------------------------------

inline int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Multilingual test-time scaling harness"};
  app.require_subcommand(1);
  Options o;

  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--run", o.run_id, "run identifier");
    sub->add_option("--config", o.config_path, "run config JSON")->check(CLI::ExistingFile);
    sub->add_option("--runs-dir", o.runs_dir, "directory holding run directories");
    sub->add_option("--parallelism", o.parallelism, "concurrent tasks")->check(CLI::PositiveNumber);
  };
  auto add_endpoint = [&](CLI::App* sub) {
    sub->add_option("--endpoint", o.endpoint, "completion endpoint URL");
    sub->add_option("--mock-script", o.mock_script, "serve completions from an in-process mock script")
        ->check(CLI::ExistingFile);
  };

  auto* run = app.add_subcommand("run-scaling", "generate budget-forced reasoning traces");
  add_run(run);
  add_endpoint(run);
  run->add_option("--languages", o.languages, "comma-separated language codes");
  run->add_option("--samples", o.samples, "samples per question")->check(CLI::PositiveNumber);
  run->add_option("--seed", o.seed, "run seed");

  auto* extract = app.add_subcommand("extract-answers", "extract checkpoint answers for stored traces");
  add_run(extract);
  add_endpoint(extract);

  auto* curve = app.add_subcommand("curve", "write scaling-curve CSV");
  add_run(curve);
  curve->add_option("--group", o.group, "language | resource-class")
      ->check(CLI::IsMember({"language", "resource-class"}));
  curve->add_option("--limits", o.limits, "comma-separated token limits");

  auto* fid = app.add_subcommand("fidelity", "write language-fidelity CSVs");
  add_run(fid);
  auto* sim = app.add_subcommand("similarity", "write similarity-to-English CSVs");
  add_run(sim);
  auto* cons = app.add_subcommand("consistency", "write prefix-consistency CSVs");
  add_run(cons);

  auto* exp = app.add_subcommand("export-prefixes", "export the MITT training set");
  add_run(exp);
  exp->add_option("--strategy", o.strategy, "e3 | h1")->check(CLI::IsMember({"e3", "h1", "E3", "H1"}));
  exp->add_option("--seed", o.seed, "shuffle seed (omit for sorted order)");

  auto* serve = app.add_subcommand("mock-serve", "serve the deterministic mock endpoint");
  serve->add_option("--mock-script", o.mock_script, "mock script JSON")->check(CLI::ExistingFile);
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--port", o.port, "bind port");

  auto* rep = app.add_subcommand("report", "summarize a run");
  add_run(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kConfigError;
  }

  try {
    if (*run) return cmd_run_scaling(o);
    if (*extract) return cmd_extract_answers(o);
    if (*curve) return cmd_curve(o);
    if (*fid) return cmd_fidelity(o);
    if (*sim) return cmd_similarity(o);
    if (*cons) return cmd_consistency(o);
    if (*exp) return cmd_export_prefixes(o);
    if (*serve) return cmd_mock_serve(o);
    if (*rep) return cmd_report(o);
  } catch (const ConfigError& e) {
    log(std::string("configuration error: ") + e.what());
    return kConfigError;
  } catch (const IngestionError& e) {
    log(std::string("dataset error: ") + e.what());
    return kConfigError;
  } catch (const InputError& e) {
    log(std::string("error: ") + e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kPartial;
  }
  return kConfigError;
}

}  // namespace mlscale::cli
