#pragma once

// Test-time scaling orchestration: prompt assembly, budget-forced reasoning
// generation with wait-prompt injection, checkpoint answer extraction,
// exact-match scoring and scaling-curve aggregation.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlscale/corpus.hpp"
#include "mlscale/gateway.hpp"
#include "mlscale/model.hpp"
#include "mlscale/util.hpp"

namespace mlscale::scaler {

inline constexpr std::string_view kAnswerMarker = "\\boxed{";

enum class CheckpointMode : std::uint8_t { every_stride, at_limits };

struct ScalingPolicy {
  std::int64_t budget = 10000;
  std::int64_t stride = 32;
  CheckpointMode mode = CheckpointMode::every_stride;
  std::vector<std::int64_t> limits;  // at_limits only
  double answer_temperature = 0.0;
  std::int64_t max_answer_tokens = 32;

  double temperature = 0.7;
  std::optional<double> top_p;
  std::vector<std::string> stop_sequences;

  std::int64_t wait_cap = 50;
  std::size_t trigger_window = 16;
  int max_stream_resumes = 3;

  void validate() const {
    if (budget < 0) throw ConfigError("budget must be >= 0");
    if (stride < 1) throw ConfigError("checkpoint stride must be >= 1");
    if (max_answer_tokens < 1) throw ConfigError("max_answer_tokens must be >= 1");
    if (wait_cap < 0) throw ConfigError("wait cap must be >= 0");
    if (trigger_window < 1) throw ConfigError("trigger window must be >= 1");
    if (mode == CheckpointMode::at_limits) {
      if (limits.empty()) throw ConfigError("at_limits mode needs at least one limit");
      for (auto l : limits)
        if (l < 0 || l >= budget)
          throw ConfigError("checkpoint limit " + std::to_string(l) + " must lie in [0, budget)");
    }
  }
};

// Reasoning-token positions at which answers are extracted, restricted to
// positions the trace actually reached.
inline std::vector<std::int64_t> checkpoint_positions(const ScalingPolicy& policy,
                                                      std::int64_t realized_tokens) {
  std::vector<std::int64_t> out;
  if (policy.mode == CheckpointMode::every_stride) {
    for (std::int64_t pos = 0; pos < policy.budget && pos <= realized_tokens; pos += policy.stride)
      out.push_back(pos);
  } else {
    std::set<std::int64_t> uniq(policy.limits.begin(), policy.limits.end());
    for (auto l : uniq)
      if (l <= realized_tokens) out.push_back(l);
  }
  return out;
}

inline PromptBundle build_prompt(const corpus::PromptCatalog& catalog, const Question& question) {
  const auto& e = catalog.entry(question.language);
  return PromptBundle{e.system, e.demonstration, question.text, e.initiation,
                      e.wait,   e.answer,        question.language};
}

struct TraceOptions {
  std::string trace_id;
  QuestionRef question;
  std::int64_t sample_index = 0;
  std::optional<std::uint64_t> seed;
};

using TokenObserver = std::function<void(const TokenRecord&)>;

// Generates one reasoning trace under budget forcing. Whenever the stream
// ends on its own (end of sequence or a stop sequence) or the answer marker
// shows up among the last `trigger_window` generated tokens, the wait prompt
// is appended as injected tokens and generation resumes from the extended
// context. Injected tokens never count towards the budget.
inline ReasoningTrace run_trace(const PromptBundle& bundle, const ScalingPolicy& policy,
                                gateway::CompletionClient& client, const TraceOptions& options = {},
                                const TokenObserver& on_token = {}) {
  policy.validate();
  ReasoningTrace trace;
  trace.trace_id = options.trace_id;
  trace.language = bundle.language;
  trace.question = options.question;
  trace.sample_index = options.sample_index;
  trace.budget = policy.budget;
  trace.model_id = client.model_id();
  trace.created_at = util::utc_timestamp();
  trace.prompt = bundle.prompt_text();

  std::string context = trace.prompt;
  const auto wait_pieces = util::split_pieces(" " + bundle.wait_prompt);
  std::int64_t generated = 0;
  std::deque<std::string> recent;  // generated tokens since the last injection
  int resumes = 0;
  int stalled = 0;

  auto push = [&](TokenRecord rec) {
    context += rec.text;
    if (on_token) on_token(rec);
    trace.tokens.push_back(std::move(rec));
  };

  while (generated < policy.budget) {
    gateway::CompletionRequest req;
    req.prompt_text = context;
    req.max_new_tokens = policy.budget - generated;
    req.stop_sequences = policy.stop_sequences;
    req.temperature = policy.temperature;
    req.top_p = policy.top_p;
    req.seed = options.seed;

    const auto before = generated;
    bool marker = false;
    auto reason = gateway::StopReason::none;
    try {
      client.complete_stream(req, [&](const gateway::StreamEvent& ev) {
        if (ev.is_stop()) {
          reason = ev.stop_reason;
          return false;
        }
        push(TokenRecord{ev.token_text, generated, false});
        ++generated;
        recent.push_back(ev.token_text);
        if (recent.size() > policy.trigger_window) recent.pop_front();
        if (generated >= policy.budget) return false;
        std::string tail;
        for (const auto& t : recent) tail += t;
        if (tail.find(kAnswerMarker) != std::string::npos) {
          marker = true;
          return false;
        }
        return true;
      });
    } catch (const TransportError& e) {
      // Tokens received before the break are kept; the next request
      // continues from them, so nothing is duplicated.
      if (++resumes > policy.max_stream_resumes) {
        trace.status = TraceStatus::partial;
        trace.failure = e.what();
        break;
      }
      continue;
    }
    if (generated >= policy.budget) break;

    bool answer_attempt = marker || reason == gateway::StopReason::end_of_sequence ||
                          reason == gateway::StopReason::stop_sequence;
    if (!answer_attempt) {
      stalled = generated == before ? stalled + 1 : 0;
      if (stalled >= 3) {
        trace.status = TraceStatus::partial;
        trace.failure = "completion endpoint made no progress";
        break;
      }
      continue;
    }
    if (trace.injections >= policy.wait_cap) {
      trace.status = TraceStatus::cap_reached;
      break;
    }
    for (const auto& piece : wait_pieces) push(TokenRecord{piece, std::nullopt, true});
    ++trace.injections;
    recent.clear();
  }
  return trace;
}

// ---- answer parsing ---------------------------------------------------------

namespace detail {

inline bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct DigitRun {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<DigitRun> digit_runs(std::string_view s) {
  std::vector<DigitRun> runs;
  for (std::size_t i = 0; i < s.size();) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_digit(s[j])) ++j;
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

// Integer value of a digit run with leading zeros stripped; empty on overflow.
inline std::optional<std::int64_t> run_value(std::string_view s, DigitRun r, bool negative) {
  auto digits = s.substr(r.begin, r.end - r.begin);
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  std::int64_t v = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc()) return std::nullopt;
  return negative ? -v : v;
}

inline bool negative_sign_before(std::string_view s, std::size_t begin) {
  if (begin == 0 || s[begin - 1] != '-') return false;
  return begin < 2 || !(is_alpha(s[begin - 2]) || is_digit(s[begin - 2]) || s[begin - 2] == ')');
}

// Content between "\boxed{" at `open` and its matching brace.
inline std::string_view boxed_content(std::string_view s, std::size_t open) {
  std::size_t start = open + kAnswerMarker.size();
  int depth = 1;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    else if (s[i] == '}' && --depth == 0) return s.substr(start, i - start);
  }
  return s.substr(start);
}

}  // namespace detail

struct ParsedAnswer {
  std::optional<std::int64_t> value;
  ParseStatus status = ParseStatus::unparseable;
};

// Integer inside the last \boxed{...}; surrounding LaTeX and leading zeros
// are ignored, but the content must hold exactly one integer and no
// decimal part. Without any box, the last standalone integer of the text is
// used instead.
inline ParsedAnswer parse_answer(std::string_view text) {
  using namespace detail;
  auto open = text.rfind(kAnswerMarker);
  if (open != std::string_view::npos) {
    auto content = boxed_content(text, open);
    auto runs = digit_runs(content);
    if (runs.size() != 1) return {};
    auto r = runs.front();
    if (r.end + 1 < content.size() && content[r.end] == '.' && is_digit(content[r.end + 1])) return {};
    auto v = run_value(content, r, negative_sign_before(content, r.begin));
    if (!v) return {};
    return {v, ParseStatus::boxed};
  }
  auto runs = digit_runs(text);
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    auto r = *it;
    bool before_ok = r.begin == 0 || !(is_alpha(text[r.begin - 1]) ||
                                       (text[r.begin - 1] == '.' && r.begin >= 2 &&
                                        is_digit(text[r.begin - 2])) ||
                                       text[r.begin - 1] == ',');
    bool after_ok = r.end == text.size() ||
                    !(is_alpha(text[r.end]) ||
                      ((text[r.end] == '.' || text[r.end] == ',') && r.end + 1 < text.size() &&
                       is_digit(text[r.end + 1])));
    if (!before_ok || !after_ok) continue;
    auto v = run_value(text, r, negative_sign_before(text, r.begin));
    if (!v) continue;
    return {v, ParseStatus::fallback_last_integer};
  }
  return {};
}

inline bool exact_match(std::optional<std::int64_t> parsed, int gold) {
  if (gold < 0 || gold > 999) throw InputError("gold answer must lie in [0, 999]");
  return parsed.has_value() && *parsed == gold;
}

// ---- checkpoint extraction --------------------------------------------------

// Answer elicited after exactly `reasoning_tokens` generated tokens. The
// request text is prompt + trace prefix (injected tokens in place) + answer
// prompt; the output never enters the trace.
inline CheckpointAnswer extract_answer_at(const ReasoningTrace& trace, std::int64_t reasoning_tokens,
                                          const PromptBundle& bundle,
                                          gateway::CompletionClient& client,
                                          const ScalingPolicy& policy, int gold) {
  if (reasoning_tokens < 0) throw InputError("checkpoint position must be >= 0");
  if (reasoning_tokens >= trace.budget)
    throw InputError("checkpoint at " + std::to_string(reasoning_tokens) +
                     " tokens is not below the trace budget " + std::to_string(trace.budget));
  auto prefix = trace.prefix_through_generated(static_cast<std::size_t>(reasoning_tokens));

  gateway::CompletionRequest req;
  req.prompt_text = bundle.prompt_text() + prefix + "\n\n" + bundle.answer_prompt;
  req.max_new_tokens = policy.max_answer_tokens;
  req.temperature = policy.answer_temperature;
  std::string raw;
  client.complete_stream(req, [&](const gateway::StreamEvent& ev) {
    if (!ev.is_stop()) raw += ev.token_text;
    return true;
  });

  CheckpointAnswer a;
  a.k = reasoning_tokens / policy.stride;
  a.reasoning_tokens = reasoning_tokens;
  a.raw_answer_text = raw;
  auto parsed = parse_answer(raw);
  a.parsed_answer = parsed.value;
  a.parse_status = parsed.status;
  a.correct = exact_match(parsed.value, gold);
  return a;
}

inline CheckpointAnswer extract_answer(const ReasoningTrace& trace, std::int64_t k,
                                       const PromptBundle& bundle, gateway::CompletionClient& client,
                                       const ScalingPolicy& policy, int gold) {
  if (k < 0) throw InputError("checkpoint index must be >= 0");
  return extract_answer_at(trace, policy.stride * k, bundle, client, policy, gold);
}

// All checkpoints of the policy that the trace reached, in order.
inline std::vector<CheckpointAnswer> extract_all(const ReasoningTrace& trace,
                                                 const PromptBundle& bundle,
                                                 gateway::CompletionClient& client,
                                                 const ScalingPolicy& policy, int gold,
                                                 std::size_t parallelism = 1) {
  auto positions =
      checkpoint_positions(policy, static_cast<std::int64_t>(trace.generated_count()));
  std::vector<CheckpointAnswer> out(positions.size());
  util::parallel_for(positions.size(), parallelism, [&](std::size_t i) {
    out[i] = extract_answer_at(trace, positions[i], bundle, client, policy, gold);
  });
  return out;
}

// ---- scaling curves -----------------------------------------------------------

enum class Grouping : std::uint8_t { per_language, per_resource_class };

struct CurvePoint {
  std::int64_t reasoning_tokens = 0;
  double accuracy = 0.0;
  std::int64_t n = 0;

  bool operator==(const CurvePoint&) const = default;
};

struct ScalingCurve {
  std::string label;  // language code or resource class
  Grouping grouping = Grouping::per_language;
  std::vector<CurvePoint> points;
};

struct ScoredTrace {
  Language language = Language::en;
  QuestionRef question;
  std::int64_t sample_index = 0;
  std::vector<CheckpointAnswer> answers;
};

namespace detail {

// correct flag per point for one trace; with limits, each limit takes the
// latest checkpoint at or below it.
inline std::map<std::int64_t, bool> trace_points(const ScoredTrace& t,
                                                 const std::optional<std::vector<std::int64_t>>& limits) {
  std::map<std::int64_t, bool> by_pos;
  for (const auto& a : t.answers) by_pos[a.reasoning_tokens] = a.correct;
  if (!limits) return by_pos;
  std::map<std::int64_t, bool> out;
  for (auto l : *limits) {
    auto it = by_pos.upper_bound(l);
    if (it == by_pos.begin()) continue;
    out[l] = std::prev(it)->second;
  }
  return out;
}

inline ScalingCurve language_curve(Language l, const std::vector<ScoredTrace>& traces,
                                   const std::optional<std::vector<std::int64_t>>& limits) {
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> tally;  // pos -> (correct, n)
  for (const auto& t : traces) {
    if (t.language != l) continue;
    for (auto [pos, ok] : trace_points(t, limits)) {
      tally[pos].first += ok ? 1 : 0;
      tally[pos].second += 1;
    }
  }
  ScalingCurve c{std::string(to_string(l)), Grouping::per_language, {}};
  for (auto [pos, cn] : tally)
    c.points.push_back({pos, static_cast<double>(cn.first) / static_cast<double>(cn.second), cn.second});
  return c;
}

}  // namespace detail

// Per-language curves: accuracy at a point is the mean of `correct` over all
// (question, sample) traces reaching it. Resource-class curves average the
// member language curves with equal weight.
inline std::vector<ScalingCurve> scaling_curve(const std::vector<ScoredTrace>& traces,
                                               Grouping grouping,
                                               const std::optional<std::vector<std::int64_t>>& limits = std::nullopt) {
  std::vector<Language> present;
  for (auto l : kStudyLanguages)
    if (std::any_of(traces.begin(), traces.end(), [&](const auto& t) { return t.language == l; }))
      present.push_back(l);

  std::vector<ScalingCurve> per_lang;
  for (auto l : present) per_lang.push_back(detail::language_curve(l, traces, limits));
  if (grouping == Grouping::per_language) return per_lang;

  std::vector<ScalingCurve> out;
  for (auto cls : {ResourceClass::high, ResourceClass::low}) {
    ScalingCurve c{std::string(to_string(cls)), Grouping::per_resource_class, {}};
    std::map<std::int64_t, std::pair<double, std::int64_t>> sum;  // pos -> (sum acc, n)
    std::map<std::int64_t, int> members;
    for (std::size_t i = 0; i < present.size(); ++i) {
      if (resource_class(present[i]) != cls) continue;
      for (const auto& p : per_lang[i].points) {
        sum[p.reasoning_tokens].first += p.accuracy;
        sum[p.reasoning_tokens].second += p.n;
        members[p.reasoning_tokens] += 1;
      }
    }
    for (auto [pos, s] : sum)
      c.points.push_back({pos, s.first / members[pos], s.second});
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mlscale::scaler
