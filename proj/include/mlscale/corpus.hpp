#pragma once

// Ingestion of the multilingual question set and the per-language prompt
// catalog.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlscale/model.hpp"
#include "mlscale/prompt_tables.hpp"

namespace mlscale::corpus {

struct PromptEntry {
  std::string system;
  std::string demonstration;
  std::string initiation;
  std::string wait;
  std::string answer;

  bool operator==(const PromptEntry&) const = default;
};

class PromptCatalog {
 public:
  static PromptCatalog defaults() {
    PromptCatalog c;
    for (const auto& e : prompts::kDefaults) {
      c.entries_[language_from_code(e.code)] =
          PromptEntry{std::string(e.system), std::string(e.demonstration),
                      std::string(e.initiation), std::string(e.wait), std::string(e.answer)};
    }
    return c;
  }

  bool has(Language l) const { return entries_.count(l) != 0; }

  const PromptEntry& entry(Language l) const {
    auto it = entries_.find(l);
    if (it == entries_.end())
      throw ConfigError("prompt catalog has no entry for language '" +
                        std::string(to_string(l)) + "'");
    return it->second;
  }

  void set(Language l, PromptEntry e) { entries_[l] = std::move(e); }

  // Throws unless every language in `languages` has a complete entry.
  void require(const std::vector<Language>& languages) const {
    for (auto l : languages) {
      const auto& e = entry(l);
      for (const auto* field : {&e.system, &e.demonstration, &e.initiation, &e.wait, &e.answer})
        if (field->empty())
          throw ConfigError("prompt catalog entry for '" + std::string(to_string(l)) +
                            "' has an empty component");
    }
  }

  const std::map<Language, PromptEntry>& entries() const { return entries_; }

 private:
  std::map<Language, PromptEntry> entries_;
};

// Applies a JSON override document {"<lang>": {"system": ..., ...}} on top of
// the built-in defaults.
inline PromptCatalog parse_prompt_overrides(const json& doc) {
  auto catalog = PromptCatalog::defaults();
  if (!doc.is_object()) throw ConfigError("prompt override file must be a JSON object");
  for (const auto& [code, fields] : doc.items()) {
    auto lang = parse_language(code);
    if (!lang || *lang == Language::other)
      throw ConfigError("prompt override references unknown language '" + code + "'");
    if (!fields.is_object())
      throw ConfigError("prompt override for '" + code + "' must be an object");
    auto e = catalog.entry(*lang);
    for (const auto& [name, value] : fields.items()) {
      if (!value.is_string())
        throw ConfigError("prompt override " + code + "." + name + " must be a string");
      auto v = value.get<std::string>();
      if (name == "system") e.system = v;
      else if (name == "demonstration") e.demonstration = v;
      else if (name == "initiation") e.initiation = v;
      else if (name == "wait") e.wait = v;
      else if (name == "answer") e.answer = v;
      else throw ConfigError("prompt override " + code + " has unknown field '" + name + "'");
    }
    catalog.set(*lang, std::move(e));
  }
  catalog.require({kStudyLanguages.begin(), kStudyLanguages.end()});
  return catalog;
}

inline PromptCatalog load_prompts(const std::optional<std::filesystem::path>& path = std::nullopt) {
  if (!path) return PromptCatalog::defaults();
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open prompt override file " + path->string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("prompt override file " + path->string() + ": " + e.what());
  }
  return parse_prompt_overrides(doc);
}

struct DatasetManifest {
  std::vector<std::string> dataset_ids;
  std::vector<Language> languages;
  std::vector<Question> questions;  // dataset order, then file order, then language order

  std::size_t question_count() const {
    return languages.empty() ? 0 : questions.size() / languages.size();
  }

  std::vector<Question> for_language(Language l) const {
    std::vector<Question> out;
    for (const auto& q : questions)
      if (q.language == l) out.push_back(q);
    return out;
  }
};

inline DatasetManifest parse_dataset(const json& doc) {
  auto fail = [](const std::string& why) { throw IngestionError(why); };
  if (!doc.is_object() || !doc.contains("datasets") || !doc["datasets"].is_array())
    fail("dataset file must be an object with a 'datasets' array");

  // The language set is the union of every text column in the file; each
  // question must then carry all of them.
  std::set<Language> seen;
  for (const auto& ds : doc["datasets"]) {
    if (!ds.contains("questions") || !ds["questions"].is_array())
      fail("dataset entry without a 'questions' array");
    for (const auto& q : ds["questions"]) {
      if (!q.contains("text") || !q["text"].is_object()) fail("question without a 'text' object");
      for (const auto& [code, _] : q["text"].items()) {
        auto l = parse_language(code);
        if (!l || *l == Language::other) fail("unknown language column '" + code + "'");
        seen.insert(*l);
      }
    }
  }

  DatasetManifest m;
  for (auto l : kStudyLanguages)
    if (seen.count(l)) m.languages.push_back(l);

  std::set<std::string> dataset_ids;
  for (const auto& ds : doc["datasets"]) {
    if (!ds.contains("id") || !ds["id"].is_string()) fail("dataset entry without a string 'id'");
    auto dsid = ds["id"].get<std::string>();
    if (!dataset_ids.insert(dsid).second) fail("duplicate dataset id '" + dsid + "'");
    m.dataset_ids.push_back(dsid);
    std::set<std::string> qids;
    for (const auto& q : ds["questions"]) {
      if (!q.contains("id") || !(q["id"].is_string() || q["id"].is_number_integer()))
        fail("question in dataset '" + dsid + "' without an id");
      auto qid = q["id"].is_string() ? q["id"].get<std::string>() : q["id"].dump();
      if (!qids.insert(qid).second)
        fail("duplicate question id '" + qid + "' in dataset '" + dsid + "'");
      if (!q.contains("gold")) fail("question (" + qid + ") has no gold answer");
      const auto& g = q["gold"];
      if (!g.is_number_integer())
        fail("question (" + qid + ") gold answer " + g.dump() + " is not an integer");
      auto gold = g.get<std::int64_t>();
      if (gold < 0 || gold > 999)
        fail("question (" + qid + ") gold answer " + std::to_string(gold) + " outside [0, 999]");
      for (auto l : m.languages) {
        auto code = std::string(to_string(l));
        if (!q["text"].contains(code) || !q["text"][code].is_string() ||
            q["text"][code].get<std::string>().empty())
          fail("missing text for (" + qid + ", " + code + ") in dataset '" + dsid + "'");
        m.questions.push_back(
            Question{dsid, qid, l, q["text"][code].get<std::string>(), static_cast<int>(gold)});
      }
    }
  }
  return m;
}

inline DatasetManifest load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open dataset file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IngestionError("dataset file " + path.string() + ": " + e.what());
  }
  return parse_dataset(doc);
}

}  // namespace mlscale::corpus
