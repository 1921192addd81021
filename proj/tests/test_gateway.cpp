#include <gtest/gtest.h>

#include <cmath>

#include "mlscale/corpus.hpp"
#include "mlscale/gateway.hpp"
#include "mlscale/mock.hpp"
#include "mlscale/simil.hpp"

using namespace mlscale;
using gateway::CompletionRequest;
using gateway::StopReason;
using gateway::StreamEvent;

namespace {

mock::MockScript literal_script(std::vector<std::string> tokens) {
  auto s = mock::MockScript::with_catalog_defaults();
  s.fallback.literal = std::move(tokens);
  return s;
}

CompletionRequest req(std::string prompt, std::int64_t max, std::vector<std::string> stop = {}) {
  CompletionRequest r;
  r.prompt_text = std::move(prompt);
  r.max_new_tokens = max;
  r.stop_sequences = std::move(stop);
  return r;
}

std::string tokens_of(const std::vector<StreamEvent>& evs) {
  std::string s;
  for (const auto& e : evs)
    if (!e.is_stop()) s += e.token_text;
  return s;
}

std::string en_prompt(const std::string& question = "What is 1+1?") {
  auto c = corpus::PromptCatalog::defaults();
  const auto& e = c.entry(Language::en);
  return PromptBundle{e.system, e.demonstration, question, e.initiation, e.wait, e.answer, Language::en}
      .prompt_text();
}

}  // namespace

TEST(MockEngine, LiteralScriptStopsOnLength) {
  mock::ScriptedCompletionClient client(literal_script({"a", "b", "c"}));
  auto evs = client.complete(req("anything", 3));
  ASSERT_EQ(evs.size(), 4u);
  EXPECT_EQ(tokens_of(evs), "abc");
  EXPECT_EQ(evs.back().stop_reason, StopReason::length);
}

TEST(MockEngine, StopSequenceIsNeverEmitted) {
  mock::ScriptedCompletionClient client(literal_script({"a", "X", "b"}));
  auto evs = client.complete(req("anything", 10, {"X"}));
  ASSERT_EQ(evs.size(), 2u);
  EXPECT_EQ(evs[0].token_text, "a");
  EXPECT_TRUE(evs[1].is_stop());
  EXPECT_EQ(evs[1].stop_reason, StopReason::stop_sequence);
}

TEST(MockEngine, ZeroBudgetStopsImmediately) {
  mock::ScriptedCompletionClient client(literal_script({"a"}));
  auto evs = client.complete(req("anything", 0));
  ASSERT_EQ(evs.size(), 1u);
  EXPECT_EQ(evs[0].stop_reason, StopReason::length);
}

TEST(MockEngine, LiteralScriptEndsWithEndOfSequence) {
  mock::ScriptedCompletionClient client(literal_script({"a", "b"}));
  auto evs = client.complete(req("anything", 10));
  EXPECT_EQ(evs.back().stop_reason, StopReason::end_of_sequence);
}

TEST(MockEngine, UnknownPromptUsesDefaultContinuation) {
  auto script = mock::parse_script(json::parse(R"({"rules":[{"match":"ZZZ","tokens":[" q"]}]})"));
  mock::MockEngine engine(script);
  auto p = engine.inspect(en_prompt());
  EXPECT_EQ(p.rule, &engine.script().fallback);
  auto evs = engine.respond(req(en_prompt(), 5));
  EXPECT_EQ(evs.size(), 6u);
  const auto& vocab = mock::vocabulary(Language::en);
  EXPECT_EQ(evs[0].token_text, " " + vocab[0]);
}

TEST(MockEngine, RecoversStreamPositionFromPrompt) {
  mock::MockEngine engine(mock::MockScript::with_catalog_defaults());
  auto prompt = en_prompt();
  auto first = engine.respond(req(prompt, 10));
  auto text = tokens_of(first);
  auto wait = corpus::PromptCatalog::defaults().entry(Language::en).wait;
  auto cont = engine.respond(req(prompt + text + " " + wait, 5));
  const auto& vocab = mock::vocabulary(Language::en);
  EXPECT_EQ(cont[0].token_text, " " + vocab[10]);
  auto parsed = engine.inspect(prompt + text + " " + wait);
  EXPECT_EQ(parsed.generated, 10);
  EXPECT_EQ(parsed.language, Language::en);
  EXPECT_FALSE(parsed.answer_request);
}

TEST(MockEngine, DeterministicForSameRequest) {
  mock::MockEngine engine(mock::MockScript::with_catalog_defaults());
  auto r = req(en_prompt(), 50);
  r.seed = 42;
  auto a = engine.respond(r);
  auto b = engine.respond(r);
  EXPECT_EQ(tokens_of(a), tokens_of(b));
  r.seed = 43;
  EXPECT_NE(tokens_of(engine.respond(r)), tokens_of(a));
}

TEST(MockEngine, EosEveryAndBoxedEvery) {
  auto script = mock::parse_script(json::parse(R"({"default":{"eos_every":100,"boxed_every":7}})"));
  mock::MockEngine engine(script);
  auto evs = engine.respond(req(en_prompt(), 1000));
  ASSERT_EQ(evs.size(), 101u);
  EXPECT_EQ(evs.back().stop_reason, StopReason::end_of_sequence);
  EXPECT_EQ(evs[6].token_text, mock::kBoxedToken);
  EXPECT_NE(evs[5].token_text, mock::kBoxedToken);
}

TEST(MockEngine, SegmentsSwitchLanguage) {
  auto script = mock::parse_script(json::parse(
      R"({"default":{"vary_by_seed":false,"segments":[{"lang":"vi","tokens":3},{"lang":"en"}]}})"));
  mock::MockEngine engine(script);
  auto evs = engine.respond(req(en_prompt(), 5));
  EXPECT_EQ(evs[2].token_text, " " + mock::vocabulary(Language::vi)[2]);
  EXPECT_EQ(evs[3].token_text, " " + mock::vocabulary(Language::en)[3]);
}

TEST(MockEngine, AnswerRequestDependsOnReasoningLength) {
  auto script = mock::parse_script(json::parse(
      R"js({"default":{"answer":{"correct":"\\( \\boxed{42} \\)","wrong":"\\( \\boxed{7} \\)","correct_from_tokens":4}}})js"));
  mock::MockEngine engine(script);
  auto answer = corpus::PromptCatalog::defaults().entry(Language::en).answer;
  auto early = tokens_of(engine.respond(req(en_prompt() + " one two\n\n" + answer, 32)));
  auto late = tokens_of(engine.respond(req(en_prompt() + " one two three four\n\n" + answer, 32)));
  EXPECT_EQ(early, "\\( \\boxed{7} \\)");
  EXPECT_EQ(late, "\\( \\boxed{42} \\)");
}

TEST(MockEngine, MalformedScriptIsConfigError) {
  EXPECT_THROW(mock::parse_script(json::parse("[1,2]")), ConfigError);
  EXPECT_THROW(mock::parse_script(json::parse(R"({"anchors":{"xx":"y"}})")), ConfigError);
  EXPECT_THROW(mock::load_script("/nonexistent/script.json"), ConfigError);
}

TEST(Embedder, MockIsDeterministicAndDiscriminates) {
  gateway::MockEmbedder e(64);
  auto x1 = e.embed("x");
  auto x2 = e.embed("x");
  auto y = e.embed("y");
  EXPECT_EQ(x1, x2);
  EXPECT_EQ(x1.dimension, 64u);
  // Oracle: rebuild both vectors from the documented hash construction.
  auto rebuild = [](std::string_view s) {
    std::uint64_t state = util::fnv1a64(s);
    std::vector<double> v(64);
    for (auto& c : v) c = static_cast<double>(util::splitmix64(state) >> 11) / 9007199254740992.0 * 2.0 - 1.0;
    return v;
  };
  auto rx = rebuild("x");
  auto ry = rebuild("y");
  EXPECT_EQ(x1.values, rx);
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < 64; ++i) dot += rx[i] * ry[i], nx += rx[i] * rx[i], ny += ry[i] * ry[i];
  double expected = dot / (std::sqrt(nx) * std::sqrt(ny));
  EXPECT_LT(expected, 1.0);
  EXPECT_NEAR(simil::cosine(x1, y), expected, 1e-12);
  EXPECT_THROW(e.embed(""), InputError);
}

TEST(Translator, IdentityMock) {
  gateway::IdentityTranslator t;
  EXPECT_EQ(t.translate("hallo", Language::en), "hallo");
  EXPECT_THROW(t.translate("", Language::en), InputError);
}

namespace {

class CountingEmbedder final : public gateway::Embedder {
 public:
  explicit CountingEmbedder(std::size_t dim) : dim_(dim) {}
  gateway::EmbeddingVector embed(std::string_view text) override {
    ++calls;
    return {gateway::hash_embedding(text, dim_), "count", dim_};
  }
  std::string provider_id() const override { return "count"; }
  std::size_t dim_;
  int calls = 0;
};

}  // namespace

TEST(Embedder, CacheMemoizesAndChecksDimension) {
  auto inner = std::make_shared<CountingEmbedder>(8);
  gateway::EmbeddingCache cache(inner);
  cache.embed("a");
  cache.embed("a");
  cache.embed("b");
  EXPECT_EQ(inner->calls, 2);
  EXPECT_EQ(cache.size(), 2u);
  inner->dim_ = 9;
  EXPECT_THROW(cache.embed("c"), InputError);
}

TEST(Retry, RetriesOnlyUndeliveredFailures) {
  gateway::RetryPolicy p;
  p.initial_backoff = std::chrono::milliseconds(1);
  int calls = 0;
  auto v = gateway::with_retries(p, [&] {
    if (++calls < 3) throw TransportError("flaky");
    return 5;
  });
  EXPECT_EQ(v, 5);
  EXPECT_EQ(calls, 3);

  calls = 0;
  EXPECT_THROW(gateway::with_retries(p, [&]() -> int {
                 ++calls;
                 throw TransportError("mid-stream", 3);
               }),
               TransportError);
  EXPECT_EQ(calls, 1);

  calls = 0;
  EXPECT_THROW(gateway::with_retries(p, [&]() -> int {
                 ++calls;
                 throw TransportError("down");
               }),
               TransportError);
  EXPECT_EQ(calls, p.max_attempts);

  calls = 0;
  EXPECT_THROW(gateway::with_retries(p, [&]() -> int {
                 ++calls;
                 throw ConfigError("bad request");
               }),
               ConfigError);
  EXPECT_EQ(calls, 1);
}
