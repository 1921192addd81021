#pragma once

// Run configuration: JSON file plus environment overrides for credentials
// and endpoint URLs.
//
//   {
//     "dataset": "data/fixture_dataset.json",
//     "prompts": null,
//     "languages": ["en", "vi"],
//     "samples": 1,
//     "seed": 0,
//     "parallelism": 4,
//     "extract": true,
//     "policy": {"budget": 10000, "stride": 32, "checkpoint_mode": "every_stride",
//                "limits": [], "answer_temperature": 0, "max_answer_tokens": 32,
//                "wait_cap": 50, "trigger_window": 16, "stop": []},
//     "generation": {"temperature": 0.7, "top_p": null},
//     "prefix": {"samples": 100, "tokens": 32},
//     "endpoints": {
//       "completion": {"kind": "http", "url": "...", "model": "..."} | {"kind": "mock", "script": "..."},
//       "embedder": {"kind": "mock", "dimension": 64} | {"kind": "http", "url": "...", "model": "..."},
//       "monolingual_embedder": {...},
//       "translator": {"kind": "identity"} | {"kind": "http", "url": "..."}
//     },
//     "runs_dir": "runs",
//     "run_id": "demo"
//   }
//
// Relative paths are resolved against the directory of the config file.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mlscale/model.hpp"
#include "mlscale/scaler.hpp"

namespace mlscale::config {

namespace fs = std::filesystem;

struct ServiceConfig {
  std::string kind;  // "mock" | "http" | "identity"
  std::string url;
  std::string model;
  std::string script;  // mock completion script path
  std::size_t dimension = 64;
  double timeout_seconds = 120.0;
  std::string api_key;  // from the environment only, never snapshotted
};

struct RunConfig {
  fs::path dataset;
  std::optional<fs::path> prompts;
  std::vector<Language> languages{kStudyLanguages.begin(), kStudyLanguages.end()};
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
  std::size_t parallelism = 4;
  bool extract = true;
  scaler::ScalingPolicy policy;
  std::size_t prefix_samples = 100;
  std::size_t prefix_tokens = 32;
  ServiceConfig completion{"http", "http://127.0.0.1:8000/v1/completions", "model", {}, 0, 600.0, {}};
  ServiceConfig embedder{"mock", {}, "mock-embed", {}, 64, 60.0, {}};
  ServiceConfig monolingual_embedder{"mock", {}, "mock-embed", {}, 64, 60.0, {}};
  ServiceConfig translator{"identity", {}, {}, {}, 0, 60.0, {}};
  fs::path runs_dir = "runs";
  std::string run_id;

  void validate() const {
    if (dataset.empty()) throw ConfigError("config: dataset path is required");
    if (languages.empty()) throw ConfigError("config: at least one language is required");
    if (samples < 1) throw ConfigError("config: samples must be >= 1");
    if (parallelism < 1) throw ConfigError("config: parallelism must be >= 1");
    if (prefix_samples < 1 || prefix_tokens < 1) throw ConfigError("config: prefix sizes must be >= 1");
    for (const auto* s : {&completion, &embedder, &monolingual_embedder, &translator}) {
      if (s->kind == "http" && s->url.empty()) throw ConfigError("config: http endpoint without url");
    }
    if (completion.kind == "mock" && completion.script.empty())
      throw ConfigError("config: mock completion endpoint needs a script");
    if (completion.kind != "mock" && completion.kind != "http")
      throw ConfigError("config: completion kind must be mock or http");
    for (const auto* s : {&embedder, &monolingual_embedder})
      if (s->kind != "mock" && s->kind != "http")
        throw ConfigError("config: embedder kind must be mock or http");
    if (translator.kind != "identity" && translator.kind != "http")
      throw ConfigError("config: translator kind must be identity or http");
    try {
      policy.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
};

namespace detail {

inline ServiceConfig parse_service(const json& j, ServiceConfig base, const fs::path& root) {
  base.kind = j.value("kind", base.kind);
  base.url = j.value("url", base.url);
  base.model = j.value("model", base.model);
  if (j.contains("script")) {
    fs::path p = j.at("script").get<std::string>();
    base.script = (p.is_relative() ? root / p : p).lexically_normal().string();
  }
  base.dimension = j.value("dimension", base.dimension);
  base.timeout_seconds = j.value("timeout_seconds", base.timeout_seconds);
  return base;
}

inline json service_json(const ServiceConfig& s) {
  json j{{"kind", s.kind}, {"url", s.url}, {"model", s.model}};
  if (!s.script.empty()) j["script"] = s.script;
  if (s.kind != "identity") j["dimension"] = s.dimension;
  return j;
}

inline fs::path resolve(const fs::path& root, const std::string& p) {
  fs::path path = p;
  return (path.is_relative() ? root / path : path).lexically_normal();
}

}  // namespace detail

inline RunConfig parse_config(const json& j, const fs::path& root = ".") {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("dataset")) c.dataset = detail::resolve(root, j.at("dataset").get<std::string>());
    if (j.contains("prompts") && !j.at("prompts").is_null())
      c.prompts = detail::resolve(root, j.at("prompts").get<std::string>());
    if (j.contains("languages")) {
      c.languages.clear();
      for (const auto& l : j.at("languages")) c.languages.push_back(language_from_code(l.get<std::string>()));
    }
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.parallelism = j.value("parallelism", c.parallelism);
    c.extract = j.value("extract", c.extract);
    if (j.contains("policy")) {
      const auto& p = j.at("policy");
      c.policy.budget = p.value("budget", c.policy.budget);
      c.policy.stride = p.value("stride", c.policy.stride);
      auto mode = p.value("checkpoint_mode", std::string("every_stride"));
      if (mode == "every_stride") c.policy.mode = scaler::CheckpointMode::every_stride;
      else if (mode == "at_limits") c.policy.mode = scaler::CheckpointMode::at_limits;
      else throw ConfigError("config: unknown checkpoint_mode '" + mode + "'");
      c.policy.limits = p.value("limits", c.policy.limits);
      c.policy.answer_temperature = p.value("answer_temperature", c.policy.answer_temperature);
      c.policy.max_answer_tokens = p.value("max_answer_tokens", c.policy.max_answer_tokens);
      c.policy.wait_cap = p.value("wait_cap", c.policy.wait_cap);
      c.policy.trigger_window = p.value("trigger_window", c.policy.trigger_window);
      c.policy.stop_sequences = p.value("stop", c.policy.stop_sequences);
    }
    if (j.contains("generation")) {
      const auto& g = j.at("generation");
      c.policy.temperature = g.value("temperature", c.policy.temperature);
      if (g.contains("top_p") && !g.at("top_p").is_null()) c.policy.top_p = g.at("top_p").get<double>();
    }
    if (j.contains("prefix")) {
      c.prefix_samples = j.at("prefix").value("samples", c.prefix_samples);
      c.prefix_tokens = j.at("prefix").value("tokens", c.prefix_tokens);
    }
    if (j.contains("endpoints")) {
      const auto& e = j.at("endpoints");
      if (e.contains("completion")) c.completion = detail::parse_service(e.at("completion"), c.completion, root);
      if (e.contains("embedder")) c.embedder = detail::parse_service(e.at("embedder"), c.embedder, root);
      if (e.contains("monolingual_embedder"))
        c.monolingual_embedder =
            detail::parse_service(e.at("monolingual_embedder"), c.monolingual_embedder, root);
      if (e.contains("translator")) c.translator = detail::parse_service(e.at("translator"), c.translator, root);
    }
    if (j.contains("runs_dir")) c.runs_dir = detail::resolve(root, j.at("runs_dir").get<std::string>());
    c.run_id = j.value("run_id", c.run_id);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InputError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

// Everything that determines the run's outputs; credentials and runtime-only
// knobs (parallelism, endpoint locations) are left out so a run can be
// resumed against a different server.
inline json snapshot(const RunConfig& c) {
  json limits = c.policy.limits;
  return json{
      {"dataset", c.dataset.string()},
      {"prompts", c.prompts ? json(c.prompts->string()) : json(nullptr)},
      {"languages", c.languages},
      {"samples", c.samples},
      {"seed", c.seed},
      {"extract", c.extract},
      {"policy",
       {{"budget", c.policy.budget},
        {"stride", c.policy.stride},
        {"checkpoint_mode",
         c.policy.mode == scaler::CheckpointMode::every_stride ? "every_stride" : "at_limits"},
        {"limits", limits},
        {"answer_temperature", c.policy.answer_temperature},
        {"max_answer_tokens", c.policy.max_answer_tokens},
        {"wait_cap", c.policy.wait_cap},
        {"trigger_window", c.policy.trigger_window},
        {"stop", c.policy.stop_sequences}}},
      {"generation",
       {{"temperature", c.policy.temperature},
        {"top_p", c.policy.top_p ? json(*c.policy.top_p) : json(nullptr)}}},
      {"prefix", {{"samples", c.prefix_samples}, {"tokens", c.prefix_tokens}}},
      {"model", c.completion.model},
  };
}

// Restores a config from a run snapshot; endpoints come from `runtime`.
inline RunConfig from_snapshot(const json& snap, const RunConfig& runtime) {
  auto c = parse_config(snap, "/");
  c.completion = runtime.completion;
  c.completion.model = snap.value("model", c.completion.model);
  c.embedder = runtime.embedder;
  c.monolingual_embedder = runtime.monolingual_embedder;
  c.translator = runtime.translator;
  c.parallelism = runtime.parallelism;
  c.runs_dir = runtime.runs_dir;
  c.run_id = runtime.run_id;
  return c;
}

inline void apply_environment(RunConfig& c) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("HARNESS_API_KEY")) c.completion.api_key = *v;
  if (auto v = env("HARNESS_EMBED_KEY")) {
    c.embedder.api_key = *v;
    c.monolingual_embedder.api_key = *v;
  }
  if (auto v = env("HARNESS_TRANSLATE_KEY")) c.translator.api_key = *v;
  if (auto v = env("HARNESS_COMPLETION_URL")) c.completion.url = *v, c.completion.kind = "http";
  if (auto v = env("HARNESS_EMBED_URL")) {
    c.embedder.url = *v, c.embedder.kind = "http";
    c.monolingual_embedder.url = *v, c.monolingual_embedder.kind = "http";
  }
  if (auto v = env("HARNESS_TRANSLATE_URL")) c.translator.url = *v, c.translator.kind = "http";
}

inline RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  auto c = parse_config(j, fs::absolute(path).parent_path());
  apply_environment(c);
  return c;
}

}  // namespace mlscale::config
