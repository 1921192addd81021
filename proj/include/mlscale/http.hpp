#pragma once

// HTTP transport for the gateway: completion streaming over server-sent
// events, embedding and translation endpoints, and a local mock server that
// speaks the same wire protocol.
//
// Completion wire protocol:
//   POST <url>  {"model","prompt","max_tokens","stop","temperature","stream":true[,"seed","top_p"]}
//   200 text/event-stream, one event per token:
//     data: {"choices":[{"index":0,"text":"<token>","finish_reason":null}]}
//   terminal event:
//     data: {"choices":[{"index":0,"text":"","finish_reason":"length"|"stop","stop_reason":<str|null>}]}
//     data: [DONE]
//   finish_reason "stop" with a string stop_reason means a stop sequence
//   matched; without one it is end of sequence.
// Embedding:   POST {"model","input"} -> {"data":[{"embedding":[...]}]}
// Translation: POST {"text","target"} -> {"text": str}

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include "httplib.h"
#include "mlscale/gateway.hpp"
#include "mlscale/mock.hpp"

namespace mlscale::gateway {

struct EndpointConfig {
  std::string url;  // full endpoint URL, e.g. http://127.0.0.1:8080/v1/completions
  std::string model;
  std::string api_key;
  int timeout_seconds = 300;
  RetryPolicy retry;
};

namespace wire {

inline json completion_body(const CompletionRequest& req, const std::string& model) {
  json body{{"model", model},
            {"prompt", req.prompt_text},
            {"max_tokens", req.max_new_tokens},
            {"stop", req.stop_sequences},
            {"temperature", req.temperature},
            {"stream", true}};
  if (req.seed) body["seed"] = *req.seed;
  if (req.top_p) body["top_p"] = *req.top_p;
  return body;
}

inline CompletionRequest parse_completion_body(const json& body) {
  CompletionRequest r;
  r.prompt_text = body.at("prompt").get<std::string>();
  r.max_new_tokens = body.value("max_tokens", std::int64_t{16});
  if (body.contains("stop")) {
    const auto& s = body.at("stop");
    if (s.is_string()) r.stop_sequences.push_back(s.get<std::string>());
    else if (s.is_array()) r.stop_sequences = s.get<std::vector<std::string>>();
  }
  r.temperature = body.value("temperature", 0.0);
  r.stream = body.value("stream", true);
  if (body.contains("seed") && !body.at("seed").is_null()) r.seed = body.at("seed").get<std::uint64_t>();
  if (body.contains("top_p") && !body.at("top_p").is_null()) r.top_p = body.at("top_p").get<double>();
  return r;
}

inline std::string encode_event(const StreamEvent& e) {
  json choice{{"index", 0}, {"text", e.token_text}};
  if (e.is_stop()) {
    switch (e.stop_reason) {
      case StopReason::length: choice["finish_reason"] = "length"; break;
      case StopReason::stop_sequence:
        choice["finish_reason"] = "stop";
        choice["stop_reason"] = "stop_sequence";
        break;
      default:
        choice["finish_reason"] = "stop";
        choice["stop_reason"] = nullptr;
        break;
    }
  } else {
    choice["finish_reason"] = nullptr;
  }
  json payload{{"object", "text_completion"}, {"choices", json::array({choice})}};
  return "data: " + payload.dump() + "\n\n";
}

inline constexpr std::string_view kDone = "data: [DONE]\n\n";

// Incremental SSE decoder; feed raw bytes, get StreamEvents out.
class SseDecoder {
 public:
  // Returns false if the sink cancelled.
  bool feed(std::string_view bytes, const EventSink& sink) {
    buffer_.append(bytes);
    while (true) {
      auto end = buffer_.find("\n\n");
      std::size_t sep = 2;
      auto crlf = buffer_.find("\r\n\r\n");
      if (crlf != std::string::npos && (end == std::string::npos || crlf < end)) {
        end = crlf;
        sep = 4;
      }
      if (end == std::string::npos) return true;
      std::string block = buffer_.substr(0, end);
      buffer_.erase(0, end + sep);
      if (!handle_block(block, sink)) return false;
    }
  }

  bool finished() const { return stopped_; }
  bool done_marker() const { return done_; }

 private:
  bool handle_block(const std::string& block, const EventSink& sink) {
    std::string data;
    for (auto& line : util::split(block, '\n')) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.rfind("data:", 0) == 0) {
        auto payload = std::string_view(line).substr(5);
        if (!payload.empty() && payload.front() == ' ') payload.remove_prefix(1);
        if (!data.empty()) data += '\n';
        data += payload;
      }
    }
    if (data.empty()) return true;
    if (data == "[DONE]") {
      done_ = true;
      return true;
    }
    if (stopped_) return true;
    json payload = json::parse(data, nullptr, false);
    if (payload.is_discarded() || !payload.contains("choices") || payload["choices"].empty())
      throw TransportError("malformed stream event: " + data, delivered_);
    const auto& choice = payload["choices"][0];
    std::string text = choice.value("text", std::string());
    if (!text.empty()) {
      ++delivered_;
      if (!sink(StreamEvent::token(text))) return false;
    }
    if (choice.contains("finish_reason") && !choice["finish_reason"].is_null()) {
      auto reason = choice["finish_reason"].get<std::string>();
      StopReason r = StopReason::end_of_sequence;
      if (reason == "length") r = StopReason::length;
      else if (reason == "stop_sequence") r = StopReason::stop_sequence;
      else if (reason == "end_of_sequence" || reason == "eos") r = StopReason::end_of_sequence;
      else if (reason == "stop" && choice.contains("stop_reason") && choice["stop_reason"].is_string())
        r = StopReason::stop_sequence;
      stopped_ = true;
      ++delivered_;
      if (!sink(StreamEvent::stop(r))) return false;
    }
    return true;
  }

 public:
  std::size_t delivered() const { return delivered_; }

 private:
  std::string buffer_;
  std::size_t delivered_ = 0;
  bool stopped_ = false;
  bool done_ = false;
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url, const std::string& default_path) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, default_path};
  auto path = url.substr(slash);
  return {url.substr(0, slash), path == "/" ? default_path : path};
}

inline httplib::Headers auth_headers(const std::string& api_key) {
  httplib::Headers h;
  if (!api_key.empty()) h.emplace("Authorization", "Bearer " + api_key);
  return h;
}

inline void check_status(int status, const std::string& body, const std::string& what) {
  if (status >= 400 && status < 500)
    throw ConfigError(what + " rejected the request (HTTP " + std::to_string(status) + "): " + body);
  if (status != 200)
    throw TransportError(what + " returned HTTP " + std::to_string(status));
}

}  // namespace wire

class HttpCompletionClient final : public CompletionClient {
 public:
  explicit HttpCompletionClient(EndpointConfig config) : config_(std::move(config)) {
    target_ = wire::parse_url(config_.url, "/v1/completions");
  }

  void complete_stream(const CompletionRequest& request, const EventSink& sink) override {
    request.validate();
    with_retries(config_.retry, [&] { attempt(request, sink); });
  }

  std::string model_id() const override { return config_.model; }

 private:
  void attempt(const CompletionRequest& request, const EventSink& sink) {
    httplib::Client client(target_.origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Request req;
    req.method = "POST";
    req.path = target_.path;
    req.headers = wire::auth_headers(config_.api_key);
    req.headers.emplace("Accept", "text/event-stream");
    req.set_header("Content-Type", "application/json");
    req.body = wire::completion_body(request, config_.model).dump();

    wire::SseDecoder decoder;
    int status = 0;
    std::string error_body;
    bool cancelled = false;
    req.response_handler = [&](const httplib::Response& res) {
      status = res.status;
      return true;
    };
    req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
      if (status != 200) {
        error_body.append(data, len);
        return true;
      }
      if (!decoder.feed(std::string_view(data, len), sink)) {
        cancelled = true;
        return false;
      }
      return true;
    };
    httplib::Response res;
    httplib::Error err = httplib::Error::Success;
    bool ok = client.send(req, res, err);
    if (cancelled) return;
    if (!ok) {
      throw TransportError("completion stream to " + config_.url + " failed: " +
                               httplib::to_string(err),
                           decoder.delivered());
    }
    wire::check_status(status, error_body, "completion endpoint");
    if (!decoder.finished()) {
      if (decoder.done_marker()) {
        sink(StreamEvent::stop(StopReason::end_of_sequence));
        return;
      }
      throw TransportError("completion stream ended without a stop event", decoder.delivered());
    }
  }

  EndpointConfig config_;
  wire::ParsedUrl target_;
};

class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(EndpointConfig config) : config_(std::move(config)) {
    target_ = wire::parse_url(config_.url, "/v1/embeddings");
  }

  EmbeddingVector embed(std::string_view text) override {
    if (text.empty()) throw InputError("cannot embed empty text");
    return with_retries(config_.retry, [&] {
      httplib::Client client(target_.origin);
      client.set_read_timeout(config_.timeout_seconds);
      json body{{"model", config_.model}, {"input", std::string(text)}};
      auto res = client.Post(target_.path, wire::auth_headers(config_.api_key), body.dump(),
                             "application/json");
      if (!res) throw TransportError("embedding request failed: " + httplib::to_string(res.error()));
      wire::check_status(res->status, res->body, "embedding endpoint");
      auto doc = json::parse(res->body, nullptr, false);
      if (doc.is_discarded() || !doc.contains("data") || doc["data"].empty())
        throw TransportError("malformed embedding response");
      auto values = doc["data"][0].at("embedding").get<std::vector<double>>();
      if (values.empty()) throw TransportError("empty embedding returned");
      return EmbeddingVector{values, provider_id(), values.size()};
    });
  }

  std::string provider_id() const override { return "http:" + config_.model; }

 private:
  EndpointConfig config_;
  wire::ParsedUrl target_;
};

class HttpTranslator final : public Translator {
 public:
  explicit HttpTranslator(EndpointConfig config) : config_(std::move(config)) {
    target_ = wire::parse_url(config_.url, "/v1/translate");
  }

  std::string translate(std::string_view text, Language target) override {
    if (text.empty()) throw InputError("cannot translate empty text");
    return with_retries(config_.retry, [&] {
      httplib::Client client(target_.origin);
      client.set_read_timeout(config_.timeout_seconds);
      json body{{"text", std::string(text)}, {"target", std::string(to_string(target))}};
      if (!config_.model.empty()) body["model"] = config_.model;
      auto res = client.Post(target_.path, wire::auth_headers(config_.api_key), body.dump(),
                             "application/json");
      if (!res)
        throw TransportError("translation request failed: " + httplib::to_string(res.error()));
      wire::check_status(res->status, res->body, "translation endpoint");
      auto doc = json::parse(res->body, nullptr, false);
      if (doc.is_discarded() || !doc.contains("text")) throw TransportError("malformed translation response");
      return doc["text"].get<std::string>();
    });
  }

  std::string provider_id() const override { return "http:" + config_.model; }

 private:
  EndpointConfig config_;
  wire::ParsedUrl target_;
};

}  // namespace mlscale::gateway

namespace mlscale::mock {

// Local HTTP server implementing the completion, embedding and translation
// wire protocols on top of a MockEngine.
class MockServer {
 public:
  explicit MockServer(MockScript script, std::size_t embed_dimension = 64)
      : engine_(std::move(script)), embedder_(embed_dimension) {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("prompt")) {
        res.status = 400;
        res.set_content(R"({"error":"malformed request"})", "application/json");
        return;
      }
      std::vector<gateway::StreamEvent> events;
      try {
        events = engine_.respond(gateway::wire::parse_completion_body(body));
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        return;
      }
      auto payload = std::make_shared<std::string>();
      for (const auto& e : events) *payload += gateway::wire::encode_event(e);
      *payload += gateway::wire::kDone;
      res.set_chunked_content_provider(
          "text/event-stream", [payload](std::size_t offset, httplib::DataSink& sink) {
            constexpr std::size_t kChunk = 1 << 16;
            if (offset < payload->size()) {
              auto n = std::min(kChunk, payload->size() - offset);
              sink.write(payload->data() + offset, n);
            }
            if (offset + kChunk >= payload->size()) sink.done();
            return true;
          });
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("input") || !body["input"].is_string() ||
          body["input"].get<std::string>().empty()) {
        res.status = 400;
        res.set_content(R"({"error":"input must be a non-empty string"})", "application/json");
        return;
      }
      auto v = embedder_.embed(body["input"].get<std::string>());
      json out{{"data", json::array({json{{"index", 0}, {"embedding", v.values}}})}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/v1/translate", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("text") || !body["text"].is_string() ||
          body["text"].get<std::string>().empty()) {
        res.status = 400;
        res.set_content(R"({"error":"text must be a non-empty string"})", "application/json");
        return;
      }
      res.set_content(json{{"text", body["text"]}}.dump(), "application/json");
    });
  }

  ~MockServer() { stop(); }
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds to `port` (0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    host_ = host;
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ <= 0) throw Error("mock server could not bind to " + host);
    } else {
      if (!server_.bind_to_port(host, port))
        throw Error("mock server could not bind to " + host + ":" + std::to_string(port));
      port_ = port;
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  // Blocks serving on the calling thread.
  void serve(const std::string& host, int port) {
    host_ = host;
    if (!server_.bind_to_port(host, port))
      throw Error("mock server could not bind to " + host + ":" + std::to_string(port));
    port_ = port;
    server_.listen_after_bind();
  }

  void stop() {
    if (server_.is_running()) server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }
  std::string base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }
  std::string completions_url() const { return base_url() + "/v1/completions"; }
  std::string embeddings_url() const { return base_url() + "/v1/embeddings"; }
  std::string translate_url() const { return base_url() + "/v1/translate"; }
  std::size_t request_count() const { return requests_.load(); }

 private:
  MockEngine engine_;
  gateway::MockEmbedder embedder_;
  httplib::Server server_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace mlscale::mock
