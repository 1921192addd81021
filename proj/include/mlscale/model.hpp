#pragma once

// Domain types shared by every module: languages, questions, prompt bundles,
// reasoning traces and checkpoint answers, with their JSON forms.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mlscale/errors.hpp"

namespace mlscale {

using json = nlohmann::json;

enum class Language : std::uint8_t { en, de, it, pt, vi, tl, other };
enum class ResourceClass : std::uint8_t { high, low };

// Fixed order used for tie-breaking and for every language-keyed output.
inline constexpr std::array<Language, 6> kStudyLanguages{
    Language::en, Language::de, Language::it, Language::pt, Language::vi, Language::tl};

constexpr std::string_view to_string(Language l) {
  switch (l) {
    case Language::en: return "en";
    case Language::de: return "de";
    case Language::it: return "it";
    case Language::pt: return "pt";
    case Language::vi: return "vi";
    case Language::tl: return "tl";
    case Language::other: return "other";
  }
  return "other";
}

constexpr std::string_view to_string(ResourceClass c) {
  return c == ResourceClass::high ? "high" : "low";
}

inline std::optional<Language> parse_language(std::string_view code) {
  for (auto l : kStudyLanguages)
    if (to_string(l) == code) return l;
  if (code == "other") return Language::other;
  return std::nullopt;
}

inline Language language_from_code(std::string_view code) {
  auto l = parse_language(code);
  if (!l) throw InputError("unknown language code '" + std::string(code) + "'");
  return *l;
}

constexpr std::optional<ResourceClass> resource_class(Language l) {
  switch (l) {
    case Language::en:
    case Language::de:
    case Language::it:
    case Language::pt: return ResourceClass::high;
    case Language::vi:
    case Language::tl: return ResourceClass::low;
    case Language::other: return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<ResourceClass> parse_resource_class(std::string_view s) {
  if (s == "high") return ResourceClass::high;
  if (s == "low") return ResourceClass::low;
  return std::nullopt;
}

struct QuestionRef {
  std::string dataset_id;
  std::string question_id;

  std::string key() const { return dataset_id + "/" + question_id; }
  auto operator<=>(const QuestionRef&) const = default;
};

struct Question {
  std::string dataset_id;
  std::string question_id;
  Language language = Language::en;
  std::string text;
  int gold_answer = 0;

  QuestionRef ref() const { return {dataset_id, question_id}; }
  bool operator==(const Question&) const = default;
};

struct PromptBundle {
  std::string system;
  std::string demonstration;
  std::string question;
  std::string initiation;
  std::string wait_prompt;
  std::string answer_prompt;
  Language language = Language::en;

  // system, demonstration, question and initiation joined by blank lines;
  // the model continues directly after the initiation line.
  std::string prompt_text() const {
    return system + "\n\n" + demonstration + "\n\n" + question + "\n\n" + initiation;
  }
  bool operator==(const PromptBundle&) const = default;
};

struct TokenRecord {
  std::string text;
  std::optional<std::int64_t> generated_index;  // empty for injected tokens
  bool injected = false;

  bool operator==(const TokenRecord&) const = default;
};

enum class TraceStatus : std::uint8_t { complete, cap_reached, partial };

constexpr std::string_view to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::complete: return "complete";
    case TraceStatus::cap_reached: return "cap_reached";
    case TraceStatus::partial: return "partial";
  }
  return "partial";
}

inline TraceStatus parse_trace_status(std::string_view s) {
  if (s == "complete") return TraceStatus::complete;
  if (s == "cap_reached") return TraceStatus::cap_reached;
  if (s == "partial") return TraceStatus::partial;
  throw InputError("unknown trace status '" + std::string(s) + "'");
}

struct ReasoningTrace {
  std::string trace_id;
  Language language = Language::en;
  QuestionRef question;
  std::int64_t sample_index = 0;
  std::vector<TokenRecord> tokens;
  std::int64_t budget = 0;
  std::string model_id;
  std::string created_at;
  std::string prompt;  // text the first completion request was issued over
  std::int64_t injections = 0;
  TraceStatus status = TraceStatus::complete;
  std::string failure;  // set when status == partial

  std::size_t generated_count() const {
    std::size_t n = 0;
    for (const auto& t : tokens) n += t.injected ? 0 : 1;
    return n;
  }

  std::size_t injected_count() const { return tokens.size() - generated_count(); }

  std::string text() const {
    std::string out;
    for (const auto& t : tokens) out += t.text;
    return out;
  }

  // Stream text (injected tokens in place) up to and including the n-th
  // generated token. n == 0 yields the empty string.
  std::string prefix_through_generated(std::size_t n) const {
    std::string out;
    std::size_t seen = 0;
    for (const auto& t : tokens) {
      if (seen == n) break;
      out += t.text;
      if (!t.injected) ++seen;
    }
    if (seen < n)
      throw InputError("trace " + trace_id + " holds only " + std::to_string(seen) +
                       " generated tokens, " + std::to_string(n) + " requested");
    return out;
  }

  // Concatenation of the first n generated tokens only.
  std::string generated_text(std::size_t n) const {
    std::string out;
    std::size_t seen = 0;
    for (const auto& t : tokens) {
      if (seen == n) break;
      if (t.injected) continue;
      out += t.text;
      ++seen;
    }
    return out;
  }

  // Checks the token bookkeeping invariants; throws InputError on violation.
  void validate() const {
    std::int64_t expected = 0;
    for (const auto& t : tokens) {
      if (t.injected) {
        if (t.generated_index)
          throw InputError("trace " + trace_id + ": injected token carries a generated index");
        continue;
      }
      if (!t.generated_index || *t.generated_index != expected)
        throw InputError("trace " + trace_id + ": generated indices must run 0,1,2,...");
      ++expected;
    }
    if (expected > budget)
      throw InputError("trace " + trace_id + ": generated tokens exceed budget");
  }

  bool operator==(const ReasoningTrace&) const = default;
};

enum class ParseStatus : std::uint8_t { boxed, fallback_last_integer, unparseable };

constexpr std::string_view to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::boxed: return "boxed";
    case ParseStatus::fallback_last_integer: return "fallback_last_integer";
    case ParseStatus::unparseable: return "unparseable";
  }
  return "unparseable";
}

inline ParseStatus parse_parse_status(std::string_view s) {
  if (s == "boxed") return ParseStatus::boxed;
  if (s == "fallback_last_integer") return ParseStatus::fallback_last_integer;
  if (s == "unparseable") return ParseStatus::unparseable;
  throw InputError("unknown parse status '" + std::string(s) + "'");
}

struct CheckpointAnswer {
  std::int64_t k = 0;
  std::int64_t reasoning_tokens = 0;
  std::string raw_answer_text;
  std::optional<std::int64_t> parsed_answer;
  ParseStatus parse_status = ParseStatus::unparseable;
  bool correct = false;

  bool operator==(const CheckpointAnswer&) const = default;
};

// Number of checkpoints k >= 0 with stride*k < budget.
constexpr std::int64_t checkpoint_count(std::int64_t budget, std::int64_t stride) {
  if (budget <= 0 || stride <= 0) return 0;
  return (budget - 1) / stride + 1;
}

// ---- JSON forms ------------------------------------------------------------

inline void to_json(json& j, Language l) { j = std::string(to_string(l)); }
inline void from_json(const json& j, Language& l) { l = language_from_code(j.get<std::string>()); }

inline void to_json(json& j, const QuestionRef& r) {
  j = json{{"dataset_id", r.dataset_id}, {"question_id", r.question_id}};
}
inline void from_json(const json& j, QuestionRef& r) {
  j.at("dataset_id").get_to(r.dataset_id);
  j.at("question_id").get_to(r.question_id);
}

inline void to_json(json& j, const Question& q) {
  j = json{{"dataset_id", q.dataset_id}, {"question_id", q.question_id},
           {"language", q.language},     {"text", q.text},
           {"gold_answer", q.gold_answer}};
}
inline void from_json(const json& j, Question& q) {
  j.at("dataset_id").get_to(q.dataset_id);
  j.at("question_id").get_to(q.question_id);
  j.at("language").get_to(q.language);
  j.at("text").get_to(q.text);
  j.at("gold_answer").get_to(q.gold_answer);
}

inline void to_json(json& j, const PromptBundle& b) {
  j = json{{"system", b.system},         {"demonstration", b.demonstration},
           {"question", b.question},     {"initiation", b.initiation},
           {"wait_prompt", b.wait_prompt}, {"answer_prompt", b.answer_prompt},
           {"language", b.language}};
}
inline void from_json(const json& j, PromptBundle& b) {
  j.at("system").get_to(b.system);
  j.at("demonstration").get_to(b.demonstration);
  j.at("question").get_to(b.question);
  j.at("initiation").get_to(b.initiation);
  j.at("wait_prompt").get_to(b.wait_prompt);
  j.at("answer_prompt").get_to(b.answer_prompt);
  j.at("language").get_to(b.language);
}

// Token lines use the compact store schema {"t","i","inj"}.
inline void to_json(json& j, const TokenRecord& t) {
  j = json{{"t", t.text},
           {"i", t.generated_index ? json(*t.generated_index) : json(nullptr)},
           {"inj", t.injected}};
}
inline void from_json(const json& j, TokenRecord& t) {
  j.at("t").get_to(t.text);
  const auto& i = j.at("i");
  t.generated_index = i.is_null() ? std::nullopt : std::optional<std::int64_t>(i.get<std::int64_t>());
  j.at("inj").get_to(t.injected);
}

// Trace header: everything except the token list.
inline json trace_header(const ReasoningTrace& tr) {
  return json{{"trace_id", tr.trace_id},   {"language", tr.language},
              {"question", tr.question},   {"sample_index", tr.sample_index},
              {"budget", tr.budget},       {"model_id", tr.model_id},
              {"created_at", tr.created_at}, {"prompt", tr.prompt}};
}

inline void apply_trace_header(const json& j, ReasoningTrace& tr) {
  j.at("trace_id").get_to(tr.trace_id);
  j.at("language").get_to(tr.language);
  j.at("question").get_to(tr.question);
  j.at("sample_index").get_to(tr.sample_index);
  j.at("budget").get_to(tr.budget);
  j.at("model_id").get_to(tr.model_id);
  j.at("created_at").get_to(tr.created_at);
  j.at("prompt").get_to(tr.prompt);
}

inline void to_json(json& j, const ReasoningTrace& tr) {
  j = trace_header(tr);
  j["tokens"] = tr.tokens;
  j["injections"] = tr.injections;
  j["status"] = std::string(to_string(tr.status));
  j["failure"] = tr.failure;
}
inline void from_json(const json& j, ReasoningTrace& tr) {
  apply_trace_header(j, tr);
  j.at("tokens").get_to(tr.tokens);
  j.at("injections").get_to(tr.injections);
  tr.status = parse_trace_status(j.at("status").get<std::string>());
  j.at("failure").get_to(tr.failure);
}

inline void to_json(json& j, const CheckpointAnswer& a) {
  j = json{{"k", a.k},
           {"reasoning_tokens", a.reasoning_tokens},
           {"raw_answer_text", a.raw_answer_text},
           {"parsed_answer", a.parsed_answer ? json(*a.parsed_answer) : json(nullptr)},
           {"parse_status", std::string(to_string(a.parse_status))},
           {"correct", a.correct}};
}
inline void from_json(const json& j, CheckpointAnswer& a) {
  j.at("k").get_to(a.k);
  j.at("reasoning_tokens").get_to(a.reasoning_tokens);
  j.at("raw_answer_text").get_to(a.raw_answer_text);
  const auto& p = j.at("parsed_answer");
  a.parsed_answer = p.is_null() ? std::nullopt : std::optional<std::int64_t>(p.get<std::int64_t>());
  a.parse_status = parse_parse_status(j.at("parse_status").get<std::string>());
  j.at("correct").get_to(a.correct);
}

}  // namespace mlscale
