#pragma once

// Clients for the external services the pipeline talks to: streaming text
// completion, text embedding and translation. This header holds the
// transport-independent surface plus the deterministic in-process providers;
// the HTTP clients and the mock server live in http.hpp.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mlscale/errors.hpp"
#include "mlscale/model.hpp"
#include "mlscale/util.hpp"

namespace mlscale::gateway {

struct CompletionRequest {
  std::string prompt_text;
  std::int64_t max_new_tokens = 0;
  std::vector<std::string> stop_sequences;
  double temperature = 0.0;
  bool stream = true;
  std::optional<double> top_p;
  std::optional<std::uint64_t> seed;

  void validate() const {
    if (max_new_tokens < 0) throw InputError("max_new_tokens must be >= 0");
    if (temperature < 0) throw InputError("temperature must be >= 0");
    for (const auto& s : stop_sequences)
      if (s.empty()) throw InputError("stop sequences must be non-empty");
  }
};

enum class StopReason : std::uint8_t { none, length, stop_sequence, end_of_sequence };

constexpr std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::length: return "length";
    case StopReason::stop_sequence: return "stop_sequence";
    case StopReason::end_of_sequence: return "end_of_sequence";
  }
  return "none";
}

struct StreamEvent {
  enum class Kind : std::uint8_t { token, stop };

  Kind kind = Kind::token;
  std::string token_text;
  StopReason stop_reason = StopReason::none;

  static StreamEvent token(std::string text) { return {Kind::token, std::move(text), StopReason::none}; }
  static StreamEvent stop(StopReason r) { return {Kind::stop, {}, r}; }

  bool is_stop() const { return kind == Kind::stop; }
  bool operator==(const StreamEvent&) const = default;
};

// Receives stream events in order; returning false cancels the stream.
using EventSink = std::function<bool(const StreamEvent&)>;

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;

  // Emits zero or more token events followed by exactly one stop event,
  // unless the sink cancels first.
  virtual void complete_stream(const CompletionRequest& request, const EventSink& sink) = 0;
  virtual std::string model_id() const = 0;

  std::vector<StreamEvent> complete(const CompletionRequest& request) {
    std::vector<StreamEvent> events;
    complete_stream(request, [&](const StreamEvent& e) {
      events.push_back(e);
      return true;
    });
    return events;
  }
};

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider_id;
  std::size_t dimension = 0;

  bool operator==(const EmbeddingVector&) const = default;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) = 0;
  virtual std::string provider_id() const = 0;
};

class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view text, Language target) = 0;
  virtual std::string provider_id() const = 0;
};

// ---- deterministic in-process providers -----------------------------------

// Vector components are uniform in [-1, 1), drawn from a splitmix64 stream
// seeded with the FNV-1a hash of the exact text.
inline std::vector<double> hash_embedding(std::string_view text, std::size_t dimension) {
  std::uint64_t state = util::fnv1a64(text);
  std::vector<double> v(dimension);
  for (auto& x : v) {
    auto bits = util::splitmix64(state) >> 11;  // 53 random bits
    x = static_cast<double>(bits) * 0x1.0p-53 * 2.0 - 1.0;
  }
  return v;
}

class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dimension = 64, std::string provider_id = "mock-embed")
      : dimension_(dimension), provider_id_(std::move(provider_id)) {
    if (dimension_ == 0) throw ConfigError("embedding dimension must be > 0");
  }

  EmbeddingVector embed(std::string_view text) override {
    if (text.empty()) throw InputError("cannot embed empty text");
    return {hash_embedding(text, dimension_), provider_id_, dimension_};
  }
  std::string provider_id() const override { return provider_id_; }

 private:
  std::size_t dimension_;
  std::string provider_id_;
};

// Identity translation; lets the translate-then-embed path run hermetically.
class IdentityTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, Language) override {
    if (text.empty()) throw InputError("cannot translate empty text");
    return std::string(text);
  }
  std::string provider_id() const override { return "mock-translate"; }
};

// ---- caching ---------------------------------------------------------------

// Memoizes embeddings by exact text. Concurrent callers may race to compute
// the same entry; the first insert wins and both get equal values.
class EmbeddingCache final : public Embedder {
 public:
  explicit EmbeddingCache(std::shared_ptr<Embedder> inner) : inner_(std::move(inner)) {}

  EmbeddingVector embed(std::string_view text) override {
    std::string key(text);
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto v = inner_->embed(text);
    std::unique_lock lock(mutex_);
    if (!dimension_) dimension_ = v.dimension;
    if (v.dimension != *dimension_ || v.values.size() != v.dimension)
      throw InputError("embedder " + v.provider_id + " changed dimension within a run");
    return cache_.emplace(std::move(key), std::move(v)).first->second;
  }
  std::string provider_id() const override { return inner_->provider_id(); }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  std::shared_ptr<Embedder> inner_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
  std::optional<std::size_t> dimension_;
};

class TranslationCache final : public Translator {
 public:
  explicit TranslationCache(std::shared_ptr<Translator> inner) : inner_(std::move(inner)) {}

  std::string translate(std::string_view text, Language target) override {
    std::string key = std::string(to_string(target)) + '\x1f' + std::string(text);
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto out = inner_->translate(text, target);
    std::unique_lock lock(mutex_);
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }
  std::string provider_id() const override { return inner_->provider_id(); }

 private:
  std::shared_ptr<Translator> inner_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> cache_;
};

// ---- retries ---------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{100};
  double multiplier = 2.0;
};

// Retries `fn` on TransportError as long as nothing was delivered yet.
// A failure after delivery is rethrown so the caller can resume from its own
// state instead of receiving duplicate tokens.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError& e) {
      if (e.delivered() > 0 || attempt >= policy.max_attempts) throw;
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<std::int64_t>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
  }
}

}  // namespace mlscale::gateway
