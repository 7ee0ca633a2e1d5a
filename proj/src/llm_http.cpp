#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "stylemt/llm.hpp"

namespace stylemt {

HttpBackend::HttpBackend(std::string base_url, std::string api_key,
                         RetryPolicy policy, std::string path)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      policy_(policy),
      path_(std::move(path)) {}

std::unique_ptr<HttpBackend> HttpBackend::from_env(std::string base_url,
                                                   const std::string& env_var,
                                                   RetryPolicy policy) {
  const char* key = std::getenv(env_var.c_str());
  if (!key || !*key) {
    throw ConfigError("API key environment variable " + env_var +
                      " is not set");
  }
  return std::make_unique<HttpBackend>(std::move(base_url), key, policy);
}

std::string HttpBackend::id() const { return "http:" + base_url_; }

CompletionResult HttpBackend::complete(const nlohmann::json& messages,
                                       const ModelParams& params) {
  nlohmann::json body = {{"model", params.model_name},
                         {"messages", messages},
                         {"temperature", params.temperature}};
  if (params.max_tokens) body["max_tokens"] = *params.max_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  auto start = std::chrono::steady_clock::now();
  int backoff_ms = policy_.initial_backoff_ms;
  int attempt = 0;
  bool saw_429 = false;
  std::string last_failure;

  while (attempt < policy_.max_attempts) {
    ++attempt;
    // httplib clients are not safe for concurrent requests; one per call
    // keeps the backend callable from multiple workers.
    httplib::Client client(base_url_);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);

    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport: " + httplib::to_string(res.error());
    } else if (res->status == 401 || res->status == 403) {
      throw AuthError(res->status);
    } else if (res->status == 429) {
      saw_429 = true;
      last_failure = "HTTP 429";
    } else if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
    } else if (res->status >= 400) {
      throw BackendError("permanent HTTP " + std::to_string(res->status) +
                         ": " + res->body);
    } else {
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) {
        throw MalformedResponse("response body is not JSON");
      }
      if (!reply.contains("choices") || !reply["choices"].is_array() ||
          reply["choices"].empty()) {
        throw MalformedResponse("response has no choices");
      }
      const auto& choice = reply["choices"][0];
      if (!choice.contains("message") || !choice["message"].contains("content")) {
        throw MalformedResponse("choice has no message content");
      }
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      return {choice["message"]["content"].get<std::string>(),
              int(elapsed.count()), id(), attempt};
    }

    if (attempt < policy_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms = std::min(int(backoff_ms * policy_.backoff_multiplier),
                            policy_.max_backoff_ms);
    }
  }

  if (saw_429) throw RateLimited(attempt);
  if (last_failure.rfind("transport", 0) == 0) {
    throw TimeoutError(last_failure + " after " + std::to_string(attempt) +
                       " attempts");
  }
  throw BackendError(last_failure + " after " + std::to_string(attempt) +
                     " attempts");
}

}  // namespace stylemt
