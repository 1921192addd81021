#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "mlscale/mock.hpp"
#include "mlscale/simil.hpp"

using namespace mlscale;
using gateway::EmbeddingVector;

namespace {

ReasoningTrace word_trace(std::size_t n, std::size_t diverge_at = SIZE_MAX) {
  ReasoningTrace t;
  t.budget = static_cast<std::int64_t>(n);
  const auto& en = mock::vocabulary(Language::en);
  const auto& de = mock::vocabulary(Language::de);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = i < diverge_at ? en : de;
    t.tokens.push_back({" " + v[i % v.size()], static_cast<std::int64_t>(i), false});
  }
  return t;
}

EmbeddingVector vec(std::vector<double> v) {
  auto n = v.size();
  return {std::move(v), "fixed", n};
}

// Looks vectors up by exact text.
class TableEmbedder final : public gateway::Embedder {
 public:
  std::map<std::string, std::vector<double>> table;
  EmbeddingVector embed(std::string_view text) override {
    auto it = table.find(std::string(text));
    if (it == table.end()) throw TransportError("unknown text");
    return vec(it->second);
  }
  std::string provider_id() const override { return "fixed"; }
};

class FailingTranslator final : public gateway::Translator {
 public:
  std::string translate(std::string_view text, Language) override {
    if (text.find("fail") != std::string_view::npos) throw TransportError("down");
    return std::string(text);
  }
  std::string provider_id() const override { return "failing"; }
};

std::vector<EmbeddingVector> random_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = u(rng);
    out.push_back(vec(std::move(v)));
  }
  return out;
}

double naive_mean_pairwise(const std::vector<EmbeddingVector>& vs) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      double d = 0.0, a = 0.0, b = 0.0;
      for (std::size_t t = 0; t < vs[i].values.size(); ++t) d += vs[i].values[t] * vs[j].values[t];
      for (double x : vs[i].values) a += x * x;
      for (double x : vs[j].values) b += x * x;
      sum += d / (std::sqrt(a) * std::sqrt(b));
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace

TEST(Segments, Counts) {
  EXPECT_EQ(simil::incremental_segments(word_trace(10000), 1000, 32).size(), 31u);
  EXPECT_EQ(simil::incremental_segments(word_trace(100)).size(), 3u);
  EXPECT_TRUE(simil::incremental_segments(word_trace(20)).empty());
}

TEST(Segments, NestedAndSkipInjected) {
  auto t = word_trace(200);
  t.tokens.insert(t.tokens.begin() + 40, {" Wait", std::nullopt, true});
  auto segs = simil::incremental_segments(t);
  ASSERT_EQ(segs.size(), 6u);
  for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
    EXPECT_LT(segs[k].size(), segs[k + 1].size());
    EXPECT_EQ(segs[k + 1].substr(0, segs[k].size()), segs[k]);
  }
  EXPECT_EQ(segs[5].find("Wait"), std::string::npos);
  EXPECT_EQ(segs[0], t.generated_text(32));
}

TEST(Cosine, Oracles) {
  auto v = vec({0.3, -2.0, 5.5});
  EXPECT_NEAR(simil::cosine(v, v), 1.0, 1e-9);
  EXPECT_NEAR(simil::cosine(vec({1, 0}), vec({0, 1})), 0.0, 1e-9);
  EXPECT_NEAR(simil::cosine(vec({1, 1}), vec({1, 0})), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_THROW(simil::cosine(vec({0, 0}), vec({1, 0})), InputError);
  EXPECT_THROW(simil::cosine(vec({1, 0}), vec({1, 0, 0})), InputError);
}

TEST(RollingAverage, Oracles) {
  EXPECT_EQ(simil::rolling_average({1, 1, 1, 1, 1}, 5), std::vector<double>{1.0});
  EXPECT_EQ(simil::rolling_average({0, 0, 0, 0, 5}, 5), std::vector<double>{1.0});
  EXPECT_EQ(simil::rolling_average({1, 2, 3, 4, 5, 6}, 5), (std::vector<double>{3.0, 4.0}));
  EXPECT_THROW(simil::rolling_average({1, 2}, 5), InputError);
}

TEST(SimilarityToEnglish, SelfAndIdentityTranslation) {
  gateway::MockEmbedder e(32);
  gateway::IdentityTranslator tr;
  auto segs = simil::incremental_segments(word_trace(320));
  for (auto p : {simil::Pathway::multilingual_embed, simil::Pathway::translate_then_embed}) {
    auto s = simil::similarity_to_english(segs, segs, Language::vi, p, e, &tr);
    ASSERT_EQ(s.points.size(), 10u);
    for (const auto& pt : s.points) EXPECT_NEAR(*pt.cosine, 1.0, 1e-12);
    ASSERT_TRUE(s.smoothed);
    EXPECT_EQ(s.smoothed->size(), 6u);
  }
}

TEST(SimilarityToEnglish, DivergenceAfterSegmentFive) {
  gateway::MockEmbedder e(64);
  auto en = simil::incremental_segments(word_trace(320));
  auto other = simil::incremental_segments(word_trace(320, 6 * 32));
  auto s = simil::similarity_to_english(other, en, Language::de, simil::Pathway::multilingual_embed, e,
                                        nullptr, 5, 3);
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    EXPECT_EQ(s.points[k].k, static_cast<std::int64_t>(k));
    if (k <= 5) EXPECT_NEAR(*s.points[k].cosine, 1.0, 1e-12);
    else EXPECT_LT(*s.points[k].cosine, 1.0);
  }
}

TEST(SimilarityToEnglish, FailedPointIsMissing) {
  gateway::MockEmbedder e(16);
  FailingTranslator tr;
  std::vector<std::string> l{"a", "b fail", "c", "d", "e"};
  std::vector<std::string> en{"a", "b", "c", "d", "e"};
  auto s = simil::similarity_to_english(l, en, Language::vi, simil::Pathway::translate_then_embed, e, &tr);
  EXPECT_EQ(s.missing(), 1u);
  EXPECT_FALSE(s.points[1].cosine);
  EXPECT_FALSE(s.smoothed);
  EXPECT_THROW(simil::similarity_to_english(l, en, Language::vi, simil::Pathway::translate_then_embed, e,
                                            nullptr),
               ConfigError);
  en.pop_back();
  EXPECT_THROW(simil::similarity_to_english(l, en, Language::vi, simil::Pathway::multilingual_embed, e,
                                            nullptr),
               InputError);
}

TEST(Intra, HandChosenVectors) {
  std::vector<EmbeddingVector> same(100, vec({0.2, 0.4, -1.0}));
  EXPECT_NEAR(simil::intra_consistency(same), 1.0, 1e-12);
  std::vector<EmbeddingVector> three{vec({1, 0}), vec({1, 0}), vec({0.5, std::sqrt(3.0) / 2})};
  EXPECT_NEAR(simil::intra_consistency(three), 2.0 / 3.0, 1e-12);
  std::vector<EmbeddingVector> two{vec({1, 1}), vec({1, 0})};
  EXPECT_EQ(simil::intra_consistency(two), simil::cosine(two[0], two[1]));
  EXPECT_THROW(simil::intra_consistency(std::vector<EmbeddingVector>{vec({1})}), InputError);
}

TEST(Intra, BlockedEqualsNaiveBitForBit) {
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto vs = random_vectors(n, 48, seed * 100 + n);
      EXPECT_EQ(simil::mean_pairwise_cosine(vs), naive_mean_pairwise(vs)) << n << "/" << seed;
    }
  }
  auto big = random_vectors(100, 48, 9);
  EXPECT_EQ(simil::mean_pairwise_cosine(big), naive_mean_pairwise(big));
}

TEST(Intra, PermutationInvariant) {
  auto vs = random_vectors(40, 16, 3);
  auto base = simil::mean_pairwise_cosine(vs);
  std::mt19937_64 rng(11);
  for (int r = 0; r < 10; ++r) {
    std::shuffle(vs.begin(), vs.end(), rng);
    EXPECT_NEAR(simil::mean_pairwise_cosine(vs), base, 1e-12);
  }
}

TEST(Intra, TextPrefixesThroughGateway) {
  gateway::MockEmbedder e(32);
  gateway::IdentityTranslator tr;
  std::vector<std::string> same(100, " same prefix");
  EXPECT_NEAR(simil::intra_consistency(same, Language::vi, e, tr, 4), 1.0, 1e-12);
}

TEST(Inter, BruteForceTwoByTwo) {
  TableEmbedder e;
  e.table = {{"a1", {1, 0}}, {"a2", {1, 1}}, {"b1", {0, 1}}, {"b2", {2, 1}}};
  gateway::IdentityTranslator tr;
  simil::PrefixSets sets;
  sets[Language::en]["q"] = {"a1", "a2"};
  sets[Language::vi]["q"] = {"b1", "b2"};
  auto embedded = simil::embed_prefixes(sets, e, tr, 2);
  auto m = simil::inter_consistency(embedded);
  ASSERT_EQ(m.languages, (std::vector<Language>{Language::en, Language::vi}));
  auto c = [](std::vector<double> a, std::vector<double> b) {
    return (a[0] * b[0] + a[1] * b[1]) / (std::hypot(a[0], a[1]) * std::hypot(b[0], b[1]));
  };
  double brute = (c({1, 0}, {0, 1}) + c({1, 0}, {2, 1}) + c({1, 1}, {0, 1}) + c({1, 1}, {2, 1})) / 4;
  EXPECT_NEAR(*m.at(0, 1), brute, 1e-12);
  EXPECT_EQ(*m.at(0, 1), *m.at(1, 0));
  EXPECT_NEAR(*m.at(0, 0), c({1, 0}, {1, 1}), 1e-12);
  EXPECT_NEAR(*m.at(1, 1), c({0, 1}, {2, 1}), 1e-12);
}

TEST(Inter, IdenticalSetsSymmetricUnitDiagonalAndMissing) {
  gateway::MockEmbedder e(32);
  gateway::IdentityTranslator tr;
  simil::PrefixSets sets;
  for (auto l : {Language::en, Language::de, Language::vi})
    for (int q = 0; q < 3; ++q) sets[l][std::to_string(q)] = std::vector<std::string>(5, " p" + std::to_string(q));
  sets[Language::tl]["9"] = {" only", " here"};
  auto m = simil::inter_consistency(simil::embed_prefixes(sets, e, tr));
  ASSERT_EQ(m.languages.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(*m.at(i, j), 1.0, 1e-12);
      EXPECT_NEAR(*m.at(i, j), *m.at(j, i), 1e-12);
    }
  EXPECT_FALSE(m.at(0, 3));
  EXPECT_TRUE(m.at(3, 3));
}

TEST(Inter, FailedPrefixesAreCounted) {
  gateway::MockEmbedder e(8);
  FailingTranslator tr;
  simil::PrefixSets sets;
  sets[Language::vi]["q"] = {"x", "y fail", "z"};
  auto embedded = simil::embed_prefixes(sets, e, tr);
  EXPECT_EQ(embedded.failed, 1u);
  EXPECT_EQ(embedded.vectors[Language::vi]["q"].size(), 2u);
}
