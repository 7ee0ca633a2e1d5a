#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "stylemt/errors.hpp"
#include "stylemt/prompting.hpp"

namespace stylemt {

struct ModelParams {
  std::string model_name = "gpt-3.5-turbo";
  double temperature = 0.3;
  std::optional<int> max_tokens;

  nlohmann::json to_json() const;
  static ModelParams from_json(const nlohmann::json& j);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct CompletionResult {
  std::string text;       // assistant content, stripped of wire framing
  int latency_ms = 0;
  std::string backend_id;
  int attempt_count = 1;
};

// Completion backend contract. Implementations must be safe to call from
// multiple worker threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResult complete(const nlohmann::json& messages,
                                    const ModelParams& params) = 0;
  virtual std::string id() const = 0;
};

// --- Backend errors ------------------------------------------------------

class BackendError : public Error {
 public:
  using Error::Error;
};

class AuthError : public BackendError {
 public:
  explicit AuthError(int status)
      : BackendError("authentication rejected (HTTP " +
                     std::to_string(status) + ")") {}
};

class RateLimited : public BackendError {
 public:
  explicit RateLimited(int attempts)
      : BackendError("rate limited after " + std::to_string(attempts) +
                     " attempts") {}
};

class MalformedResponse : public BackendError {
 public:
  using BackendError::BackendError;
};

class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

class FixtureMiss : public BackendError {
 public:
  explicit FixtureMiss(const std::string& hash)
      : BackendError("no playback fixture for prompt hash " + hash),
        hash_(hash) {}
  const std::string& hash() const { return hash_; }

 private:
  std::string hash_;
};

// --- Mock backends -------------------------------------------------------
//
// The mocks are wire-level test oracles for the default prompt layout:
// the test source is the last line of the final user message, and
// demonstration targets are lines prefixed "<TargetLang>: " inside the
// assistant message. They are pure functions of (messages, params).

// Returns the test source sentence extracted from the final user message.
class EchoSourceBackend : public Backend {
 public:
  CompletionResult complete(const nlohmann::json& messages,
                            const ModelParams& params) override;
  std::string id() const override { return "mock-echo"; }
};

// Returns the first demonstration's target-language text; falls back to
// echoing the source for prompts without demonstrations.
class CopyBestDemoBackend : public Backend {
 public:
  explicit CopyBestDemoBackend(LanguagePair langs)
      : langs_(std::move(langs)) {}
  CompletionResult complete(const nlohmann::json& messages,
                            const ModelParams& params) override;
  std::string id() const override { return "mock-copy-demo"; }

 private:
  LanguagePair langs_;
};

// Replays recorded outputs keyed by prompt hash (sha256 of the canonical
// wire JSON). Fixture file: JSONL {"prompt_hash": str, "text": str}.
class PlaybackBackend : public Backend {
 public:
  explicit PlaybackBackend(std::map<std::string, std::string> fixtures)
      : fixtures_(std::move(fixtures)) {}
  static PlaybackBackend from_jsonl(const std::string& path);

  CompletionResult complete(const nlohmann::json& messages,
                            const ModelParams& params) override;
  std::string id() const override { return "playback"; }

 private:
  std::map<std::string, std::string> fixtures_;
};

// Helpers shared by the mocks (exposed for tests).
std::string extract_source_line(const nlohmann::json& messages);
std::optional<std::string> extract_first_demo_target(
    const nlohmann::json& messages, const LanguagePair& langs);

// --- HTTP backend --------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 5;
  int initial_backoff_ms = 500;
  double backoff_multiplier = 2.0;
  int max_backoff_ms = 8000;
};

// OpenAI-compatible chat-completions client. Retries transient failures
// (HTTP 429/5xx, timeouts) with exponential backoff; 4xx other than 429 is
// permanent and never retried. The API key comes from the environment,
// never from config files.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string base_url, std::string api_key,
              RetryPolicy policy = {},
              std::string path = "/v1/chat/completions");

  // Reads the key from `env_var`; throws ConfigError when unset.
  static std::unique_ptr<HttpBackend> from_env(
      std::string base_url, const std::string& env_var = "OPENAI_API_KEY",
      RetryPolicy policy = {});

  CompletionResult complete(const nlohmann::json& messages,
                            const ModelParams& params) override;
  std::string id() const override;

 private:
  std::string base_url_;
  std::string api_key_;
  RetryPolicy policy_;
  std::string path_;
};

}  // namespace stylemt
