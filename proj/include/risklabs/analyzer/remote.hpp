#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "risklabs/analyzer/analyzer.hpp"
#include "risklabs/core/errors.hpp"

namespace risklabs::analyzer {

struct RemoteConfig {
  std::string url;    // e.g. http://host:8080/analyze
  std::string token;  // sent as a bearer token when nonempty
  int retries = 2;    // extra attempts after the first
  int backoff_ms = 250;
  int timeout_s = 10;
  std::uint64_t jitter_seed = 0;

  /// Reads ANALYZER_URL (required) and ANALYZER_TOKEN.
  static RemoteConfig from_env() {
    RemoteConfig c;
    const char* url = std::getenv("ANALYZER_URL");
    if (!url || !*url) throw InputError("remote analyzer selected but ANALYZER_URL is not set");
    c.url = url;
    if (const char* tok = std::getenv("ANALYZER_TOKEN")) c.token = tok;
    return c;
  }
};

/// Client for an HTTP analysis service: POST {"text": ...} and read back
/// {"summary", "sentiment", "risk_terms"}. Timeouts, transport failures and
/// 5xx answers are retried; anything else fails immediately.
class RemoteAnalyzer final : public Analyzer {
 public:
  explicit RemoteAnalyzer(RemoteConfig cfg) : cfg_(std::move(cfg)) {
    const auto scheme = cfg_.url.find("://");
    if (scheme == std::string::npos) throw InputError("analyzer url '" + cfg_.url + "' has no scheme");
    const auto slash = cfg_.url.find('/', scheme + 3);
    host_ = cfg_.url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : cfg_.url.substr(slash);
  }

  std::string name() const override { return "remote"; }

  AnalyzerOutput analyze_transcript(const std::string& text) override {
    require_text(text, "analyze_transcript");
    const auto reply = post(text);
    AnalyzerOutput out;
    out.summary = reply.summary;
    out.sentiment = reply.sentiment;
    out.risk_term_count = reply.risk_terms;
    out.feature_vector = feature_vector(out.sentiment, out.risk_term_count, text);
    return out;
  }

  HeadlineLabel classify_headline(const std::string& headline) override {
    require_text(headline, "classify_headline");
    return label_from_score(post(headline).sentiment);
  }

  /// Delay before retry number `attempt` (1-based): backoff * 2^(attempt-1) * (1 + u), u ~ U[0, 0.5).
  /// The jitter stream is seeded, so the schedule is reproducible.
  std::chrono::milliseconds backoff_delay(int attempt, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 0.5);
    const double base = cfg_.backoff_ms * static_cast<double>(1 << (attempt - 1));
    return std::chrono::milliseconds(static_cast<long>(base * (1.0 + u(rng))));
  }

 private:
  struct Reply {
    std::string summary;
    double sentiment = 0.0;
    int risk_terms = 0;
  };

  Reply post(const std::string& text) const {
    httplib::Client client(host_);
    client.set_connection_timeout(cfg_.timeout_s, 0);
    client.set_read_timeout(cfg_.timeout_s, 0);
    client.set_write_timeout(cfg_.timeout_s, 0);
    httplib::Headers headers;
    if (!cfg_.token.empty()) headers.emplace("Authorization", "Bearer " + cfg_.token);
    const std::string body = nlohmann::json{{"text", text}}.dump();

    std::mt19937_64 rng(cfg_.jitter_seed);
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(backoff_delay(attempt, rng));
      auto res = client.Post(path_, headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server returned " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) throw RemoteError("analyzer returned HTTP " + std::to_string(res->status));
      return parse(res->body);
    }
    throw RemoteError("analyzer request failed after " + std::to_string(cfg_.retries + 1) + " attempts (" +
                      last_error + ")");
  }

  static Reply parse(const std::string& body) {
    try {
      const auto j = nlohmann::json::parse(body);
      Reply r;
      r.summary = j.at("summary").get<std::string>();
      r.sentiment = j.at("sentiment").get<double>();
      if (!std::isfinite(r.sentiment)) throw RemoteError("analyzer sentiment is not finite");
      r.sentiment = std::clamp(r.sentiment, -1.0, 1.0);
      r.risk_terms = j.at("risk_terms").get<int>();
      if (r.risk_terms < 0) throw RemoteError("analyzer risk_terms is negative");
      return r;
    } catch (const nlohmann::json::exception& e) {
      throw RemoteError(std::string("malformed analyzer response: ") + e.what());
    }
  }

  RemoteConfig cfg_;
  std::string host_;
  std::string path_;
};

}  // namespace risklabs::analyzer
