#pragma once

// Language-fidelity analysis of reasoning traces.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "mlscale/langid.hpp"
#include "mlscale/model.hpp"

namespace mlscale::fidelity {

struct Window {
  std::size_t index = 0;
  std::string text;
};

// Non-overlapping windows of `width` generated tokens; injected tokens are
// skipped and a trailing remainder shorter than `width` is dropped.
inline std::vector<Window> window_partition(const ReasoningTrace& trace, std::size_t width = 32) {
  if (width == 0) throw InputError("window width must be >= 1");
  std::vector<Window> windows;
  std::string cur;
  std::size_t in_window = 0;
  for (const auto& t : trace.tokens) {
    if (t.injected) continue;
    cur += t.text;
    if (++in_window == width) {
      windows.push_back({windows.size(), std::move(cur)});
      cur.clear();
      in_window = 0;
    }
  }
  return windows;
}

// Segment i covers [floor(i*m/bins), floor((i+1)*m/bins)).
inline std::vector<std::pair<std::size_t, std::size_t>> floor_partition(std::size_t m,
                                                                        std::size_t bins) {
  if (bins == 0) throw InputError("bin count must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) out.emplace_back(i * m / bins, (i + 1) * m / bins);
  return out;
}

inline std::vector<Language> classify_windows(const std::vector<Window>& windows,
                                              const langid::Identifier& identifier) {
  std::vector<Language> labels;
  labels.reserve(windows.size());
  for (const auto& w : windows) {
    if (langid::normalized_words(w.text).empty()) {
      labels.push_back(Language::other);
      continue;
    }
    labels.push_back(identifier.classify(w.text));
  }
  return labels;
}

inline void require_downsampleable(std::size_t m, std::size_t bins) {
  if (bins == 0) throw InputError("bin count must be >= 1");
  if (m == 0) throw InputError("no window labels to downsample");
  if (m < bins)
    throw InputError("trace too short to downsample: " + std::to_string(m) + " windows < " +
                     std::to_string(bins) + " bins");
}

// Mode of each floor-partition segment; ties go to the label that occurs
// first within the segment.
inline std::vector<Language> majority_downsample(const std::vector<Language>& labels,
                                                 std::size_t bins = 20) {
  require_downsampleable(labels.size(), bins);
  std::vector<Language> out;
  out.reserve(bins);
  for (auto [begin, end] : floor_partition(labels.size(), bins)) {
    std::vector<std::pair<Language, std::size_t>> tally;  // first-occurrence order
    for (std::size_t i = begin; i < end; ++i) {
      auto it = std::find_if(tally.begin(), tally.end(),
                             [&](const auto& e) { return e.first == labels[i]; });
      if (it == tally.end()) tally.emplace_back(labels[i], 1);
      else ++it->second;
    }
    auto best = tally.begin();
    for (auto it = tally.begin(); it != tally.end(); ++it)
      if (it->second > best->second) best = it;
    out.push_back(best->first);
  }
  return out;
}

// Fraction of window labels equal to `target` in each floor-partition segment.
inline std::vector<double> fidelity_score(const std::vector<Language>& labels, Language target,
                                          std::size_t bins = 100) {
  require_downsampleable(labels.size(), bins);
  std::vector<double> out;
  out.reserve(bins);
  for (auto [begin, end] : floor_partition(labels.size(), bins)) {
    std::size_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) hits += labels[i] == target ? 1 : 0;
    out.push_back(static_cast<double>(hits) / static_cast<double>(end - begin));
  }
  return out;
}

struct LanguageTrace {
  std::string trace_ref;
  Language target = Language::en;
  std::vector<Language> window_labels;
  std::vector<Language> majority_bins;  // 20
  std::vector<double> fidelity_bins;    // 100
};

inline LanguageTrace analyze(const ReasoningTrace& trace, const langid::Identifier& identifier,
                             std::size_t width = 32, std::size_t majority_bins = 20,
                             std::size_t fidelity_bins = 100) {
  LanguageTrace lt;
  lt.trace_ref = trace.trace_id;
  lt.target = trace.language;
  lt.window_labels = classify_windows(window_partition(trace, width), identifier);
  lt.majority_bins = majority_downsample(lt.window_labels, majority_bins);
  lt.fidelity_bins = fidelity_score(lt.window_labels, trace.language, fidelity_bins);
  return lt;
}

inline void to_json(json& j, const LanguageTrace& lt) {
  j = json{{"trace_id", lt.trace_ref},
           {"target", lt.target},
           {"window_labels", lt.window_labels},
           {"majority_bins", lt.majority_bins},
           {"fidelity_bins", lt.fidelity_bins}};
}

}  // namespace mlscale::fidelity
