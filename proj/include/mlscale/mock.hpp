#pragma once

// Deterministic scripted completion model. The engine is stateless: it
// recovers how far a reasoning stream has progressed from the prompt text
// alone, so continuation requests after a wait-prompt injection, checkpoint
// answer requests, and requests replayed after a crash all see the same
// model.
//
// Script JSON:
//   {
//     "anchors":          {"<lang>": str, ...}   default: initiation prompts
//     "injections":       [str, ...]             default: wait prompts
//     "answer_suffixes":  [str, ...]             default: answer prompts
//     "rules":   [ {"match": str, ...rule fields} ],
//     "default": { ...rule fields }
//   }
// Rule fields:
//   "tokens":        [str, ...]   literal continuation; end_of_sequence after the last
//   "segments":      [{"lang": "<lang>"|"prompt", "tokens": int|null}, ...]
//   "eos_every":     int          end_of_sequence after every N-th generated token
//   "boxed_every":   int          every N-th generated token is " \boxed{"
//   "vary_by_seed":  bool         request seed shifts the vocabulary offset (default true)
//   "answer": {"correct": str, "wrong": str, "correct_from_tokens": int}

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlscale/corpus.hpp"
#include "mlscale/gateway.hpp"
#include "mlscale/seed_corpora.hpp"
#include "mlscale/util.hpp"

namespace mlscale::mock {

struct Segment {
  std::optional<Language> language;  // empty: language of the prompt
  std::optional<std::int64_t> tokens;  // empty: unbounded
};

struct AnswerScript {
  std::string correct = "\\( \\boxed{0} \\)";
  std::string wrong = "\\( \\boxed{0} \\)";
  std::int64_t correct_from_tokens = 0;
};

struct Rule {
  std::string match;
  std::vector<std::string> literal;
  std::vector<Segment> segments;
  std::int64_t eos_every = 0;
  std::int64_t boxed_every = 0;
  bool vary_by_seed = true;
  AnswerScript answer;
};

struct MockScript {
  std::vector<std::pair<Language, std::string>> anchors;
  std::vector<std::string> injections;
  std::vector<std::string> answer_suffixes;
  std::vector<Rule> rules;
  Rule fallback;

  // Anchors, injections and answer suffixes taken from the built-in catalog.
  static MockScript with_catalog_defaults() {
    MockScript s;
    auto catalog = corpus::PromptCatalog::defaults();
    for (const auto& [lang, e] : catalog.entries()) {
      s.anchors.emplace_back(lang, e.initiation);
      s.injections.push_back(e.wait);
      s.answer_suffixes.push_back(e.answer);
    }
    return s;
  }
};

inline Rule parse_rule(const json& j) {
  Rule r;
  if (j.contains("match")) r.match = j.at("match").get<std::string>();
  if (j.contains("tokens")) r.literal = j.at("tokens").get<std::vector<std::string>>();
  if (j.contains("segments")) {
    for (const auto& s : j.at("segments")) {
      Segment seg;
      auto lang = s.value("lang", std::string("prompt"));
      if (lang != "prompt") seg.language = language_from_code(lang);
      if (s.contains("tokens") && !s.at("tokens").is_null())
        seg.tokens = s.at("tokens").get<std::int64_t>();
      r.segments.push_back(seg);
    }
  }
  r.eos_every = j.value("eos_every", std::int64_t{0});
  r.boxed_every = j.value("boxed_every", std::int64_t{0});
  r.vary_by_seed = j.value("vary_by_seed", true);
  if (j.contains("answer")) {
    const auto& a = j.at("answer");
    r.answer.correct = a.value("correct", r.answer.correct);
    r.answer.wrong = a.value("wrong", r.answer.wrong);
    r.answer.correct_from_tokens = a.value("correct_from_tokens", std::int64_t{0});
  }
  return r;
}

inline MockScript parse_script(const json& j) {
  if (!j.is_object()) throw ConfigError("mock script must be a JSON object");
  auto s = MockScript::with_catalog_defaults();
  try {
    if (j.contains("anchors")) {
      s.anchors.clear();
      for (const auto& [code, text] : j.at("anchors").items())
        s.anchors.emplace_back(language_from_code(code), text.get<std::string>());
    }
    if (j.contains("injections")) s.injections = j.at("injections").get<std::vector<std::string>>();
    if (j.contains("answer_suffixes"))
      s.answer_suffixes = j.at("answer_suffixes").get<std::vector<std::string>>();
    if (j.contains("rules"))
      for (const auto& r : j.at("rules")) s.rules.push_back(parse_rule(r));
    if (j.contains("default")) s.fallback = parse_rule(j.at("default"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed mock script: ") + e.what());
  } catch (const InputError& e) {
    throw ConfigError(std::string("malformed mock script: ") + e.what());
  }
  return s;
}

inline MockScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mock script " + path.string());
  try {
    return parse_script(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("mock script " + path.string() + ": " + e.what());
  }
}

// Whitespace-delimited words of the seed corpus for a language; the mock's
// reasoning tokens are these words with a leading space.
inline const std::vector<std::string>& vocabulary(Language l) {
  static const std::map<Language, std::vector<std::string>> vocab = [] {
    std::map<Language, std::vector<std::string>> m;
    m[Language::en] = util::split_words(seed::kEnglish);
    m[Language::de] = util::split_words(seed::kGerman);
    m[Language::it] = util::split_words(seed::kItalian);
    m[Language::pt] = util::split_words(seed::kPortuguese);
    m[Language::vi] = util::split_words(seed::kVietnamese);
    m[Language::tl] = util::split_words(seed::kTagalog);
    return m;
  }();
  auto it = vocab.find(l);
  return it == vocab.end() ? vocab.at(Language::en) : it->second;
}

inline constexpr std::string_view kBoxedToken = " \\boxed{";

class MockEngine {
 public:
  explicit MockEngine(MockScript script) : script_(std::move(script)) {}

  struct Parsed {
    const Rule* rule = nullptr;
    Language language = Language::en;
    std::int64_t generated = 0;  // tokens already generated in this stream
    bool answer_request = false;
  };

  Parsed inspect(const std::string& prompt) const {
    Parsed p;
    p.rule = &script_.fallback;
    std::size_t from = 0;
    for (const auto& r : script_.rules) {
      if (r.match.empty()) continue;
      auto pos = prompt.find(r.match);
      if (pos != std::string::npos) {
        p.rule = &r;
        from = pos;
        break;
      }
    }
    std::size_t anchor_end = std::string::npos;
    std::size_t best = std::string::npos;
    for (const auto& [lang, anchor] : script_.anchors) {
      if (anchor.empty()) continue;
      auto pos = prompt.find(anchor, from);
      if (pos != std::string::npos && (best == std::string::npos || pos < best)) {
        best = pos;
        anchor_end = pos + anchor.size();
        p.language = lang;
      }
    }
    if (anchor_end == std::string::npos) return p;

    std::string cont = prompt.substr(anchor_end);
    auto trimmed = util::trim(cont);
    for (const auto& suffix : script_.answer_suffixes) {
      if (!suffix.empty() && trimmed.size() >= suffix.size() &&
          trimmed.substr(trimmed.size() - suffix.size()) == suffix) {
        p.answer_request = true;
        cont = std::string(trimmed.substr(0, trimmed.size() - suffix.size()));
        break;
      }
    }
    for (const auto& inj : script_.injections) {
      if (inj.empty()) continue;
      for (auto pos = cont.find(inj); pos != std::string::npos; pos = cont.find(inj, pos))
        cont.erase(pos, inj.size());
    }
    p.generated = static_cast<std::int64_t>(util::split_words(cont).size());
    return p;
  }

  std::vector<gateway::StreamEvent> respond(const gateway::CompletionRequest& req) const {
    req.validate();
    using gateway::StopReason;
    using gateway::StreamEvent;
    std::vector<StreamEvent> out;
    auto parsed = inspect(req.prompt_text);
    const Rule& rule = *parsed.rule;

    if (parsed.answer_request) {
      const auto& text = parsed.generated >= rule.answer.correct_from_tokens ? rule.answer.correct
                                                                             : rule.answer.wrong;
      auto pieces = util::split_pieces(text);
      for (const auto& piece : pieces) {
        if (static_cast<std::int64_t>(out.size()) >= req.max_new_tokens) {
          out.push_back(StreamEvent::stop(StopReason::length));
          return out;
        }
        out.push_back(StreamEvent::token(piece));
      }
      out.push_back(StreamEvent::stop(StopReason::end_of_sequence));
      return out;
    }

    std::uint64_t offset_seed = req.seed.value_or(0);
    std::uint64_t offset_state = offset_seed;
    std::uint64_t offset = rule.vary_by_seed && req.seed ? util::splitmix64(offset_state) : 0;

    std::string emitted;
    std::int64_t produced = 0;
    for (std::int64_t pos = parsed.generated;; ++pos) {
      if (produced >= req.max_new_tokens) {
        out.push_back(StreamEvent::stop(StopReason::length));
        return out;
      }
      std::string token;
      if (!rule.literal.empty()) {
        if (pos >= static_cast<std::int64_t>(rule.literal.size())) {
          out.push_back(StreamEvent::stop(StopReason::end_of_sequence));
          return out;
        }
        token = rule.literal[static_cast<std::size_t>(pos)];
      } else if (rule.boxed_every > 0 && (pos + 1) % rule.boxed_every == 0) {
        token = kBoxedToken;
      } else {
        const auto& words = vocabulary(language_at(rule, parsed.language, pos));
        token = " " + words[(offset + static_cast<std::uint64_t>(pos)) % words.size()];
      }
      std::string candidate = emitted + token;
      for (const auto& stop : req.stop_sequences) {
        if (candidate.find(stop) != std::string::npos) {
          out.push_back(StreamEvent::stop(StopReason::stop_sequence));
          return out;
        }
      }
      emitted = std::move(candidate);
      out.push_back(StreamEvent::token(std::move(token)));
      ++produced;
      if (rule.eos_every > 0 && (pos + 1) % rule.eos_every == 0 &&
          produced < req.max_new_tokens) {
        out.push_back(StreamEvent::stop(StopReason::end_of_sequence));
        return out;
      }
    }
  }

  const MockScript& script() const { return script_; }

 private:
  static Language language_at(const Rule& rule, Language prompt_language, std::int64_t pos) {
    std::int64_t start = 0;
    for (const auto& seg : rule.segments) {
      if (!seg.tokens || pos < start + *seg.tokens) return seg.language.value_or(prompt_language);
      start += *seg.tokens;
    }
    if (!rule.segments.empty()) return rule.segments.back().language.value_or(prompt_language);
    return prompt_language;
  }

  MockScript script_;
};

// In-process completion client backed by a MockEngine.
class ScriptedCompletionClient final : public gateway::CompletionClient {
 public:
  explicit ScriptedCompletionClient(MockScript script, std::string model = "mock-model")
      : engine_(std::move(script)), model_(std::move(model)) {}

  void complete_stream(const gateway::CompletionRequest& request,
                       const gateway::EventSink& sink) override {
    for (const auto& e : engine_.respond(request))
      if (!sink(e)) return;
  }
  std::string model_id() const override { return model_; }

 private:
  MockEngine engine_;
  std::string model_;
};

}  // namespace mlscale::mock
