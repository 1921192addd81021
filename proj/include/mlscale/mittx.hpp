#pragma once

// MITT corpus construction: initial reasoning prefixes collected from stored
// traces, assembled into the E3 (English, 3 epochs) or H1 (high-resource
// languages, 1 epoch) training sets and exported as line-delimited JSON with
// a sidecar manifest.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "mlscale/model.hpp"
#include "mlscale/util.hpp"

namespace mlscale::mittx {

struct PrefixSample {
  Language language = Language::en;
  QuestionRef question;
  std::int64_t sample_index = 0;
  std::string text;
  std::string prompt_context;
};

struct Deficit {
  Language language = Language::en;
  QuestionRef question;
  std::int64_t available = 0;
  std::int64_t required = 0;
};

struct PrefixCollection {
  std::vector<PrefixSample> prefixes;
  std::vector<Deficit> deficits;
};

// Up to n prefixes of exactly prefix_tokens generated tokens per
// (language, question) cell, taken in sample order. Traces that are too
// short are skipped; cells that end up with fewer than n are reported.
inline PrefixCollection collect_prefixes(const std::vector<ReasoningTrace>& traces,
                                         const std::vector<Language>& languages,
                                         const std::vector<QuestionRef>& questions,
                                         std::size_t n = 100, std::size_t prefix_tokens = 32) {
  if (n < 1) throw InputError("prefix count must be >= 1");
  if (prefix_tokens < 1) throw InputError("prefix length must be >= 1");
  std::map<std::pair<Language, QuestionRef>, std::vector<const ReasoningTrace*>> cells;
  for (const auto& t : traces) {
    if (std::find(languages.begin(), languages.end(), t.language) == languages.end()) continue;
    if (t.generated_count() < prefix_tokens) continue;
    cells[{t.language, t.question}].push_back(&t);
  }
  PrefixCollection out;
  for (auto l : languages) {
    for (const auto& q : questions) {
      auto it = cells.find({l, q});
      std::vector<const ReasoningTrace*> usable;
      if (it != cells.end()) usable = it->second;
      std::sort(usable.begin(), usable.end(),
                [](const auto* a, const auto* b) { return a->sample_index < b->sample_index; });
      usable.erase(std::unique(usable.begin(), usable.end(),
                               [](const auto* a, const auto* b) {
                                 return a->sample_index == b->sample_index;
                               }),
                   usable.end());
      if (usable.size() < n)
        out.deficits.push_back({l, q, static_cast<std::int64_t>(usable.size()),
                                static_cast<std::int64_t>(n)});
      for (std::size_t i = 0; i < std::min(n, usable.size()); ++i) {
        const auto* t = usable[i];
        out.prefixes.push_back(
            {l, q, t->sample_index, t->generated_text(prefix_tokens), t->prompt});
      }
    }
  }
  return out;
}

enum class Strategy : std::uint8_t { E3, H1 };

constexpr std::string_view to_string(Strategy s) { return s == Strategy::E3 ? "E3" : "H1"; }

inline Strategy parse_strategy(std::string_view s) {
  if (s == "e3" || s == "E3") return Strategy::E3;
  if (s == "h1" || s == "H1") return Strategy::H1;
  throw ConfigError("unknown MITT strategy '" + std::string(s) + "' (expected e3 or h1)");
}

inline std::vector<Language> strategy_languages(Strategy s) {
  if (s == Strategy::E3) return {Language::en};
  return {Language::en, Language::de, Language::it, Language::pt};
}

constexpr int strategy_epochs(Strategy s) { return s == Strategy::E3 ? 3 : 1; }

struct TrainingRecord {
  std::string text;
  Language language = Language::en;
  std::string question_id;  // "<dataset>/<question>"
  std::int64_t sample_index = 0;

  bool operator==(const TrainingRecord&) const = default;
};

struct Provenance {
  std::vector<std::string> source_runs;
  std::optional<std::uint64_t> shuffle_seed;
};

struct TrainingSet {
  Strategy strategy = Strategy::E3;
  std::vector<TrainingRecord> records;
  int epochs = 3;
  Provenance provenance;

  std::map<Language, std::size_t> counts() const {
    std::map<Language, std::size_t> c;
    for (const auto& r : records) ++c[r.language];
    return c;
  }
};

// Fisher-Yates over a 64-bit Mersenne twister with rejection sampling, so the
// order depends only on the seed and not on the standard library.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    std::swap(v[i - 1], v[x % bound]);
  }
}

// Records ordered by (language, question, sample index); languages outside
// the strategy are dropped.
inline TrainingSet assemble(Strategy strategy, const std::vector<PrefixSample>& prefixes,
                            std::optional<std::uint64_t> shuffle_seed = std::nullopt,
                            std::vector<std::string> source_runs = {}) {
  auto langs = strategy_languages(strategy);
  for (auto l : langs) {
    bool present = std::any_of(prefixes.begin(), prefixes.end(),
                               [&](const auto& p) { return p.language == l; });
    if (!present)
      throw InputError("strategy " + std::string(to_string(strategy)) + " needs " +
                       std::string(to_string(l)) + " prefixes, none were found");
  }
  TrainingSet set;
  set.strategy = strategy;
  set.epochs = strategy_epochs(strategy);
  set.provenance = {std::move(source_runs), shuffle_seed};
  std::vector<const PrefixSample*> chosen;
  for (const auto& p : prefixes)
    if (std::find(langs.begin(), langs.end(), p.language) != langs.end()) chosen.push_back(&p);
  std::sort(chosen.begin(), chosen.end(), [](const auto* a, const auto* b) {
    return std::tie(a->language, a->question, a->sample_index) <
           std::tie(b->language, b->question, b->sample_index);
  });
  for (const auto* p : chosen)
    set.records.push_back({p->text, p->language, p->question.key(), p->sample_index});
  if (shuffle_seed) seeded_shuffle(set.records, *shuffle_seed);
  return set;
}

// ---- export -----------------------------------------------------------------

inline std::string record_line(const TrainingRecord& r) {
  nlohmann::ordered_json j;
  j["text"] = r.text;
  j["lang"] = std::string(to_string(r.language));
  j["question_id"] = r.question_id;
  j["sample_index"] = r.sample_index;
  return j.dump();
}

inline std::filesystem::path manifest_path_for(const std::filesystem::path& training_file) {
  auto p = training_file;
  p.replace_extension(".manifest.json");
  return p;
}

inline nlohmann::ordered_json manifest_json(const TrainingSet& set,
                                            const std::filesystem::path& training_file) {
  nlohmann::ordered_json m;
  m["format"] = "mitt-prefixes/1";
  m["training_file"] = training_file.filename().string();
  m["strategy"] = std::string(to_string(set.strategy));
  m["epochs"] = set.epochs;
  m["records"] = set.records.size();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [l, c] : set.counts()) counts[std::string(to_string(l))] = c;
  m["counts"] = counts;
  m["shuffle_seed"] = set.provenance.shuffle_seed ? nlohmann::ordered_json(*set.provenance.shuffle_seed)
                                                  : nlohmann::ordered_json(nullptr);
  m["source_runs"] = set.provenance.source_runs;
  m["objective"] = "causal_lm";
  return m;
}

// Writes the training file and its sidecar manifest; returns the manifest path.
inline std::filesystem::path export_training_set(const TrainingSet& set,
                                                 const std::filesystem::path& training_file) {
  if (training_file.has_parent_path()) std::filesystem::create_directories(training_file.parent_path());
  {
    std::ofstream out(training_file, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + training_file.string());
    for (const auto& r : set.records) out << record_line(r) << '\n';
    if (!out) throw StoreError("write failed for " + training_file.string());
  }
  auto mpath = manifest_path_for(training_file);
  std::ofstream mout(mpath, std::ios::binary | std::ios::trunc);
  if (!mout) throw StoreError("cannot write " + mpath.string());
  mout << manifest_json(set, training_file).dump(2) << '\n';
  return mpath;
}

// Reads a training file back, validating every line against the schema.
inline std::vector<TrainingRecord> read_training_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot open " + path.string());
  std::vector<TrainingRecord> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    try {
      auto j = json::parse(line);
      TrainingRecord r;
      r.text = j.at("text").get<std::string>();
      r.language = language_from_code(j.at("lang").get<std::string>());
      r.question_id = j.at("question_id").get<std::string>();
      r.sample_index = j.at("sample_index").get<std::int64_t>();
      if (j.size() != 4) throw InputError("unexpected fields");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw CorruptionError(path.string(), no, e.what());
    }
  }
  return out;
}

}  // namespace mlscale::mittx
