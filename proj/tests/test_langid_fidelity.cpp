#include <gtest/gtest.h>

#include <numeric>

#include "mlscale/fidelity.hpp"
#include "mlscale/langid.hpp"
#include "mlscale/mock.hpp"

using namespace mlscale;

namespace {

ReasoningTrace vocab_trace(std::size_t n, Language target, std::size_t switch_at, Language first,
                           Language second) {
  ReasoningTrace t;
  t.trace_id = "t";
  t.language = target;
  t.budget = static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = mock::vocabulary(i < switch_at ? first : second);
    t.tokens.push_back({" " + v[i % v.size()], static_cast<std::int64_t>(i), false});
  }
  return t;
}

class FixedIdentifier final : public langid::Identifier {
 public:
  Language classify(std::string_view text) const override {
    return text.find("vi") != std::string_view::npos ? Language::vi : Language::en;
  }
};

}  // namespace

TEST(Langid, NormalizationDropsLatexAndDigits) {
  auto w = langid::normalized_words("Tính \\frac{1}{2} + 3 = ĐÚNG");
  ASSERT_EQ(w.size(), 2u);
  std::string lowered;
  for (auto c : w[1]) util::utf8_append(lowered, c);
  EXPECT_EQ(lowered, "đúng");
  EXPECT_TRUE(langid::normalized_words("\\boxed{42} = 7").empty());
}

TEST(Langid, HeldOutAccuracyGate) {
  auto report = langid::evaluate_held_out(5, 32);
  for (auto l : kStudyLanguages) {
    EXPECT_GE(report.tally.at(l).second, 25u) << to_string(l);
    EXPECT_GE(report.accuracy(l), 0.95) << to_string(l);
  }
}

TEST(Langid, PosteriorSumsToOneAndEmptyIsOther) {
  auto id = langid::default_identifier();
  auto p = id->posterior("Hãy suy nghĩ từng bước");
  EXPECT_EQ(p.label, Language::vi);
  double sum = 0;
  for (const auto& [_, s] : p.scores) sum += s;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(id->classify("123 + 456"), Language::other);
  EXPECT_EQ(id->candidates().size(), 7u);
}

TEST(Fidelity, WindowPartitionCounts) {
  auto t = vocab_trace(10000, Language::en, 10000, Language::en, Language::en);
  EXPECT_EQ(fidelity::window_partition(t).size(), 312u);
  t.tokens.insert(t.tokens.begin() + 5, {" Wait", std::nullopt, true});
  auto w = fidelity::window_partition(t);
  EXPECT_EQ(w.size(), 312u);
  EXPECT_EQ(w[0].text.find("Wait"), std::string::npos);
  EXPECT_THROW(fidelity::window_partition(t, 0), InputError);
}

TEST(Fidelity, FloorPartitionSizes) {
  auto parts = fidelity::floor_partition(312, 20);
  std::size_t sum = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    // Oracle: segment bounds computed independently as integer floor.
    EXPECT_EQ(parts[i].first, i * 312 / 20);
    auto size = parts[i].second - parts[i].first;
    EXPECT_TRUE(size == 15 || size == 16);
    sum += size;
  }
  EXPECT_EQ(sum, 312u);
  EXPECT_EQ(parts.back().second, 312u);
}

TEST(Fidelity, MajorityTieGoesToFirstInSegment) {
  using L = Language;
  std::vector<L> labels{L::vi, L::en, L::en, L::vi, L::de, L::de, L::de, L::en};
  auto out = fidelity::majority_downsample(labels, 4);
  EXPECT_EQ(out, (std::vector<L>{L::vi, L::en, L::de, L::de}));
  EXPECT_THROW(fidelity::majority_downsample(labels, 9), InputError);
  EXPECT_THROW(fidelity::majority_downsample({}, 1), InputError);
}

TEST(Fidelity, ScoreIsFractionPerSegment) {
  using L = Language;
  std::vector<L> labels{L::vi, L::en, L::vi, L::vi, L::other, L::en};
  auto s = fidelity::fidelity_score(labels, L::vi, 3);
  EXPECT_EQ(s, (std::vector<double>{0.5, 1.0, 0.0}));
}

TEST(Fidelity, LatexOnlyWindowIsOther) {
  ReasoningTrace t;
  t.budget = 4;
  for (int i = 0; i < 4; ++i) t.tokens.push_back({" \\boxed{1}", i, false});
  auto labels = fidelity::classify_windows(fidelity::window_partition(t, 2), FixedIdentifier{});
  EXPECT_EQ(labels, (std::vector<Language>{Language::other, Language::other}));
}

TEST(Fidelity, VietnameseThenEnglishTrace) {
  auto t = vocab_trace(9984, Language::vi, 4992, Language::vi, Language::en);
  auto lt = fidelity::analyze(t, *langid::default_identifier());
  ASSERT_EQ(lt.window_labels.size(), 312u);
  std::vector<Language> expected(10, Language::vi);
  expected.insert(expected.end(), 10, Language::en);
  EXPECT_EQ(lt.majority_bins, expected);
  ASSERT_EQ(lt.fidelity_bins.size(), 100u);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(lt.fidelity_bins[i], 1.0) << i;
  for (std::size_t i = 50; i < 100; ++i) EXPECT_EQ(lt.fidelity_bins[i], 0.0) << i;
}
