#pragma once

// Character n-gram (orders 1..3) multinomial naive Bayes language
// identifier over the six study languages. Text with no alphabetic content
// is labelled `other`.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlscale/model.hpp"
#include "mlscale/seed_corpora.hpp"
#include "mlscale/util.hpp"

namespace mlscale::langid {

// Swappable classifier interface; an external tool can sit behind it.
class Identifier {
 public:
  virtual ~Identifier() = default;
  virtual Language classify(std::string_view text) const = 0;
};

namespace detail {

inline bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c < 0xC0) return false;
  if (c == 0xD7 || c == 0xF7) return false;  // multiplication and division signs
  if (c >= 0x2000 && c < 0x2C00) return false;  // punctuation, arrows, math operators
  if (c == 0xFFFD) return false;
  return true;
}

inline char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 && c != 0x138 && c != 0x149 &&
      c != 0x17F) {
    // Latin Extended-A alternates upper/lower, with a parity flip at 0x139..0x148 and 0x179..0x17E.
    bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    bool is_upper = odd_upper ? (c % 2 == 1) : (c % 2 == 0);
    return is_upper ? c + 1 : c;
  }
  if (c >= 0x1EA0 && c <= 0x1EF9 && c % 2 == 0) return c + 1;  // Vietnamese block
  if (c == 0x1A0 || c == 0x1AF) return c + 1;                  // Ơ, Ư
  return c;
}

}  // namespace detail

// Lower-cased words of the alphabetic content. LaTeX control words
// (\frac, \boxed, ...) and every non-letter character are dropped.
inline std::vector<std::u32string> normalized_words(std::string_view text) {
  auto cps = util::utf8_decode(text);
  std::vector<std::u32string> words;
  std::u32string cur;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (c == U'\\') {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
      while (i + 1 < cps.size() && cps[i + 1] < 0x80 && detail::is_letter(cps[i + 1])) ++i;
      continue;
    }
    if (detail::is_letter(c)) {
      cur.push_back(detail::to_lower(c));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

// n-grams of orders 1..3 over each word padded with a space on both sides,
// encoded back to UTF-8.
inline std::vector<std::string> extract_ngrams(std::string_view text) {
  std::vector<std::string> grams;
  for (const auto& w : normalized_words(text)) {
    std::u32string padded = U" " + w + U" ";
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        if (n == 1 && padded[i] == U' ') continue;
        std::string g;
        for (std::size_t j = i; j < i + n; ++j) util::utf8_append(g, padded[j]);
        grams.push_back(std::move(g));
      }
    }
  }
  return grams;
}

struct Posterior {
  Language label = Language::other;
  std::vector<std::pair<Language, double>> scores;  // sums to 1 over the candidate set
};

class NgramIdentifier final : public Identifier {
 public:
  // Trains on (language, text) pairs. `smoothing` is the additive constant.
  NgramIdentifier(const std::vector<std::pair<Language, std::string>>& training,
                  double smoothing = 0.5)
      : smoothing_(smoothing) {
    std::map<Language, std::unordered_map<std::string, double>> counts;
    for (const auto& [lang, text] : training) {
      auto& c = counts[lang];
      for (auto& g : extract_ngrams(text)) {
        c[g] += 1.0;
        vocabulary_.emplace(g, 0);
      }
    }
    for (auto l : kStudyLanguages) {
      if (!counts.count(l)) continue;
      Model m;
      m.language = l;
      for (const auto& [_, v] : counts[l]) m.total += v;
      double denom = m.total + smoothing_ * static_cast<double>(vocabulary_.size() + 1);
      m.log_unseen = std::log(smoothing_ / denom);
      for (const auto& [g, v] : counts[l]) m.log_prob.emplace(g, std::log((v + smoothing_) / denom));
      models_.push_back(std::move(m));
    }
    if (models_.empty()) throw InputError("language identifier needs training text");
  }

  std::vector<Language> candidates() const {
    std::vector<Language> out;
    for (const auto& m : models_) out.push_back(m.language);
    out.push_back(Language::other);
    return out;
  }

  Posterior posterior(std::string_view text) const {
    auto grams = extract_ngrams(text);
    Posterior p;
    if (grams.empty()) {
      for (const auto& m : models_) p.scores.emplace_back(m.language, 0.0);
      p.scores.emplace_back(Language::other, 1.0);
      p.label = Language::other;
      return p;
    }
    std::vector<double> loglik;
    for (const auto& m : models_) {
      double ll = 0.0;
      for (const auto& g : grams) {
        auto it = m.log_prob.find(g);
        ll += it == m.log_prob.end() ? m.log_unseen : it->second;
      }
      loglik.push_back(ll);
    }
    // Strictly-greater scan in candidate order breaks ties towards the
    // earlier language.
    std::size_t best = 0;
    for (std::size_t i = 1; i < loglik.size(); ++i)
      if (loglik[i] > loglik[best]) best = i;
    double z = 0.0;
    for (double ll : loglik) z += std::exp(ll - loglik[best]);
    for (std::size_t i = 0; i < models_.size(); ++i)
      p.scores.emplace_back(models_[i].language, std::exp(loglik[i] - loglik[best]) / z);
    p.scores.emplace_back(Language::other, 0.0);
    p.label = models_[best].language;
    return p;
  }

  Language classify(std::string_view text) const override { return posterior(text).label; }

 private:
  struct Model {
    Language language = Language::en;
    double total = 0.0;
    double log_unseen = 0.0;
    std::unordered_map<std::string, double> log_prob;
  };

  double smoothing_;
  std::unordered_map<std::string, int> vocabulary_;
  std::vector<Model> models_;
};

inline std::string_view seed_text(Language l) {
  switch (l) {
    case Language::en: return seed::kEnglish;
    case Language::de: return seed::kGerman;
    case Language::it: return seed::kItalian;
    case Language::pt: return seed::kPortuguese;
    case Language::vi: return seed::kVietnamese;
    case Language::tl: return seed::kTagalog;
    default: return {};
  }
}

// Seed corpus words split into a training head and a held-out tail.
struct SeedSplit {
  std::vector<std::string> train;
  std::vector<std::string> held_out;
};

inline SeedSplit split_seed(Language l, double held_out_fraction) {
  auto words = util::split_words(seed_text(l));
  auto cut = words.size() - static_cast<std::size_t>(static_cast<double>(words.size()) * held_out_fraction);
  SeedSplit s;
  s.train.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(cut));
  s.held_out.assign(words.begin() + static_cast<std::ptrdiff_t>(cut), words.end());
  return s;
}

// Identifier trained on the leading (1 - held_out_fraction) of every seed
// corpus. held_out_fraction = 0 trains on everything.
inline NgramIdentifier train_from_seed(double held_out_fraction = 0.0) {
  std::vector<std::pair<Language, std::string>> training;
  for (auto l : kStudyLanguages)
    training.emplace_back(l, util::join(split_seed(l, held_out_fraction).train, " "));
  return NgramIdentifier(training);
}

// k-fold held-out evaluation on the seed corpora: each fold holds out a
// contiguous slice of every corpus, trains on the rest, and classifies the
// slice in non-overlapping samples of `sample_words` words.
struct HeldOutReport {
  std::map<Language, std::pair<std::size_t, std::size_t>> tally;  // correct, total

  double accuracy(Language l) const {
    auto it = tally.find(l);
    if (it == tally.end() || it->second.second == 0) return 0.0;
    return static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
  }
};

inline HeldOutReport evaluate_held_out(std::size_t folds = 5, std::size_t sample_words = 32) {
  if (folds < 2 || sample_words == 0) throw InputError("need at least 2 folds and 1 word per sample");
  HeldOutReport report;
  std::map<Language, std::vector<std::string>> words;
  for (auto l : kStudyLanguages) words[l] = util::split_words(seed_text(l));
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::pair<Language, std::string>> training;
    std::map<Language, std::vector<std::string>> held;
    for (auto l : kStudyLanguages) {
      const auto& w = words[l];
      auto lo = f * w.size() / folds;
      auto hi = (f + 1) * w.size() / folds;
      std::vector<std::string> train(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lo));
      train.insert(train.end(), w.begin() + static_cast<std::ptrdiff_t>(hi), w.end());
      training.emplace_back(l, util::join(train, " "));
      held[l].assign(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    NgramIdentifier id(training);
    for (auto l : kStudyLanguages) {
      const auto& h = held[l];
      for (std::size_t i = 0; i + sample_words <= h.size(); i += sample_words) {
        std::vector<std::string> sample(h.begin() + static_cast<std::ptrdiff_t>(i),
                                        h.begin() + static_cast<std::ptrdiff_t>(i + sample_words));
        auto& t = report.tally[l];
        t.first += id.classify(util::join(sample, " ")) == l ? 1 : 0;
        ++t.second;
      }
    }
  }
  return report;
}

inline std::shared_ptr<const NgramIdentifier> default_identifier() {
  static const auto instance = std::make_shared<const NgramIdentifier>(train_from_seed(0.0));
  return instance;
}

}  // namespace mlscale::langid
