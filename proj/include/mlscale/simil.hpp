#pragma once

// Similarity analytics over reasoning text: incremental-segment similarity
// to English and intra/inter-language consistency of reasoning prefixes.

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlscale/gateway.hpp"
#include "mlscale/model.hpp"
#include "mlscale/util.hpp"

namespace mlscale::simil {

// Segment k is the text of the first step*(k+1) generated tokens, for every
// k with step*(k+1) <= max_tokens that the trace reaches.
inline std::vector<std::string> incremental_segments(const ReasoningTrace& trace,
                                                     std::int64_t max_tokens = 1000,
                                                     std::int64_t step = 32) {
  if (step < 1) throw InputError("segment step must be >= 1");
  std::vector<std::string> segments;
  std::string text;
  std::int64_t seen = 0;
  for (const auto& t : trace.tokens) {
    if (t.injected) continue;
    if (seen + 1 > max_tokens) break;
    text += t.text;
    ++seen;
    if (seen % step == 0) segments.push_back(text);
  }
  return segments;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InputError("cosine of vectors with different dimensions (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity undefined for a zero vector");
  return dot(a, b) / (na * nb);
}

inline double cosine(const gateway::EmbeddingVector& a, const gateway::EmbeddingVector& b) {
  return cosine(std::span<const double>(a.values), std::span<const double>(b.values));
}

// Trailing mean: out[i] = mean(points[i .. i+window-1]).
inline std::vector<double> rolling_average(const std::vector<double>& points, std::size_t window = 5) {
  if (window < 1) throw InputError("rolling window must be >= 1");
  if (points.size() < window)
    throw InputError("rolling average needs at least " + std::to_string(window) + " points");
  std::vector<double> out;
  out.reserve(points.size() - window + 1);
  for (std::size_t i = 0; i + window <= points.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < i + window; ++j) s += points[j];
    out.push_back(s / static_cast<double>(window));
  }
  return out;
}

enum class Pathway : std::uint8_t { multilingual_embed, translate_then_embed };

constexpr std::string_view to_string(Pathway p) {
  return p == Pathway::multilingual_embed ? "multilingual_embed" : "translate_then_embed";
}

struct SimilarityPoint {
  std::int64_t k = 0;
  std::optional<double> cosine;  // empty when a gateway call failed
};

struct SimilaritySeries {
  Language language = Language::en;
  Pathway pathway = Pathway::multilingual_embed;
  std::vector<SimilarityPoint> points;
  std::optional<std::vector<double>> smoothed;

  std::size_t missing() const {
    std::size_t n = 0;
    for (const auto& p : points) n += p.cosine ? 0 : 1;
    return n;
  }
};

// Point k compares segment k of language l with English segment k. On the
// translate path the non-English segment is translated to English first.
inline SimilaritySeries similarity_to_english(const std::vector<std::string>& segments_l,
                                              const std::vector<std::string>& segments_en,
                                              Language language, Pathway pathway,
                                              gateway::Embedder& embedder,
                                              gateway::Translator* translator,
                                              std::size_t smoothing_window = 5,
                                              std::size_t parallelism = 1) {
  if (segments_l.size() != segments_en.size())
    throw InputError("segment counts differ: " + std::to_string(segments_l.size()) + " vs " +
                     std::to_string(segments_en.size()));
  if (pathway == Pathway::translate_then_embed && !translator)
    throw ConfigError("translate_then_embed needs a translator");
  SimilaritySeries s;
  s.language = language;
  s.pathway = pathway;
  s.points.resize(segments_l.size());
  util::parallel_for(segments_l.size(), parallelism, [&](std::size_t k) {
    s.points[k].k = static_cast<std::int64_t>(k);
    try {
      std::string text = segments_l[k];
      if (pathway == Pathway::translate_then_embed && language != Language::en)
        text = translator->translate(text, Language::en);
      s.points[k].cosine = cosine(embedder.embed(text), embedder.embed(segments_en[k]));
    } catch (const TransportError&) {
    } catch (const InputError&) {
    }
  });
  if (s.missing() == 0 && s.points.size() >= smoothing_window) {
    std::vector<double> raw;
    for (const auto& p : s.points) raw.push_back(*p.cosine);
    s.smoothed = rolling_average(raw, smoothing_window);
  }
  return s;
}

// ---- pairwise means -------------------------------------------------------------

// Mean cosine over all unordered pairs i < j. Dot products are evaluated in
// cache-sized tiles; the sum is then taken in (i, j) lexicographic order so
// the result matches a naive double loop exactly.
inline double mean_pairwise_cosine(const std::vector<gateway::EmbeddingVector>& vs) {
  const std::size_t n = vs.size();
  if (n < 2) throw InputError("pairwise consistency needs at least 2 prefixes");
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vs[i].values.size() != vs[0].values.size())
      throw InputError("embeddings with mixed dimensions");
    norms[i] = norm(vs[i].values);
    if (norms[i] == 0.0) throw InputError("cosine similarity undefined for a zero vector");
  }
  auto index = [n](std::size_t i, std::size_t j) { return i * n - i * (i + 1) / 2 + (j - i - 1); };
  std::vector<double> cos(n * (n - 1) / 2);
  constexpr std::size_t kTile = 16;
  for (std::size_t bi = 0; bi < n; bi += kTile)
    for (std::size_t bj = bi; bj < n; bj += kTile)
      for (std::size_t i = bi; i < std::min(bi + kTile, n); ++i)
        for (std::size_t j = std::max(bj, i + 1); j < std::min(bj + kTile, n); ++j)
          cos[index(i, j)] = dot(vs[i].values, vs[j].values) / (norms[i] * norms[j]);
  double sum = 0.0;
  for (double c : cos) sum += c;
  return sum / static_cast<double>(cos.size());
}

// Mean cosine over all cross pairs (a_i, b_j).
inline double mean_cross_cosine(const std::vector<gateway::EmbeddingVector>& a,
                                const std::vector<gateway::EmbeddingVector>& b) {
  if (a.empty() || b.empty()) throw InputError("cross consistency needs prefixes on both sides");
  double sum = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) sum += cosine(x, y);
  return sum / static_cast<double>(a.size() * b.size());
}

inline double intra_consistency(const std::vector<gateway::EmbeddingVector>& embedded) {
  return mean_pairwise_cosine(embedded);
}

// ---- embedding of prefix sets --------------------------------------------------

// prefixes[language][question_key] -> prefix texts
using PrefixSets = std::map<Language, std::map<std::string, std::vector<std::string>>>;

struct EmbeddedPrefixes {
  std::map<Language, std::map<std::string, std::vector<gateway::EmbeddingVector>>> vectors;
  std::size_t failed = 0;  // prefixes dropped after a gateway failure
};

// Translate-then-embed for every prefix; English passes through untranslated.
inline EmbeddedPrefixes embed_prefixes(const PrefixSets& sets, gateway::Embedder& embedder,
                                       gateway::Translator& translator,
                                       std::size_t parallelism = 1) {
  struct Job {
    Language lang;
    const std::string* key;
    const std::string* text;
  };
  std::vector<Job> jobs;
  for (const auto& [lang, by_q] : sets)
    for (const auto& [key, texts] : by_q)
      for (const auto& t : texts) jobs.push_back({lang, &key, &t});

  std::vector<std::optional<gateway::EmbeddingVector>> results(jobs.size());
  util::parallel_for(jobs.size(), parallelism, [&](std::size_t i) {
    try {
      std::string text = *jobs[i].text;
      if (jobs[i].lang != Language::en) text = translator.translate(text, Language::en);
      results[i] = embedder.embed(text);
    } catch (const TransportError&) {
    } catch (const InputError&) {
    }
  });

  EmbeddedPrefixes out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& slot = out.vectors[jobs[i].lang][*jobs[i].key];
    if (results[i]) slot.push_back(std::move(*results[i]));
    else ++out.failed;
  }
  return out;
}

inline double intra_consistency(const std::vector<std::string>& prefixes, Language language,
                                gateway::Embedder& embedder, gateway::Translator& translator,
                                std::size_t parallelism = 1) {
  if (prefixes.size() < 2) throw InputError("pairwise consistency needs at least 2 prefixes");
  PrefixSets sets;
  sets[language]["q"] = prefixes;
  auto embedded = embed_prefixes(sets, embedder, translator, parallelism);
  return mean_pairwise_cosine(embedded.vectors[language]["q"]);
}

struct ConsistencyMatrix {
  std::vector<Language> languages;
  std::vector<std::vector<std::optional<double>>> values;  // missing cells are empty

  const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

// Per-question intra-language consistency scores (the distribution behind a
// language's mean score).
inline std::map<Language, std::vector<std::pair<std::string, double>>> intra_scores(
    const EmbeddedPrefixes& e) {
  std::map<Language, std::vector<std::pair<std::string, double>>> out;
  for (const auto& [lang, by_q] : e.vectors)
    for (const auto& [key, vs] : by_q)
      if (vs.size() >= 2) out[lang].emplace_back(key, mean_pairwise_cosine(vs));
  return out;
}

// Entry (l1, l2): mean over shared questions of the mean cross-pair cosine.
// The diagonal holds the intra-language consistency averaged over questions.
inline ConsistencyMatrix inter_consistency(const EmbeddedPrefixes& e) {
  ConsistencyMatrix m;
  for (auto l : kStudyLanguages)
    if (e.vectors.count(l)) m.languages.push_back(l);
  const auto n = m.languages.size();
  m.values.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& qi = e.vectors.at(m.languages[i]);
    for (std::size_t j = i; j < n; ++j) {
      const auto& qj = e.vectors.at(m.languages[j]);
      double sum = 0.0;
      std::size_t questions = 0;
      for (const auto& [key, vi] : qi) {
        auto it = qj.find(key);
        if (it == qj.end()) continue;
        if (i == j) {
          if (vi.size() < 2) continue;
          sum += mean_pairwise_cosine(vi);
        } else {
          if (vi.empty() || it->second.empty()) continue;
          sum += mean_cross_cosine(vi, it->second);
        }
        ++questions;
      }
      if (questions == 0) continue;
      m.values[i][j] = sum / static_cast<double>(questions);
      m.values[j][i] = m.values[i][j];
    }
  }
  return m;
}

}  // namespace mlscale::simil
