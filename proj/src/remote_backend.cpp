// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/remote_backend.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "internal/http_util.hpp"
#include "sampsel/errors.hpp"

namespace sampsel::backend {
namespace {

using json = nlohmann::json;

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

std::chrono::milliseconds RetryPolicy::delay(int attempt) const {
  const double scaled = static_cast<double>(initial_backoff.count()) *
                        std::pow(multiplier, static_cast<double>(std::max(0, attempt - 1)));
  const double capped = std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

RemoteBackend::RemoteBackend(RemoteBackendOptions options) : options_(std::move(options)) {
  if (options_.base_url.empty()) throw ConfigError("remote backend needs a base URL");
}

CompletionResult parse_completion_response(std::string_view body, bool want_logprobs) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw RunError(std::string("completion response is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw RunError("completion response is not an object");
  if (doc.contains("error")) throw RunError("server error: " + doc["error"].dump());
  if (!doc.contains("text") || !doc["text"].is_string()) {
    throw RunError("completion response lacks \"text\"");
  }
  CompletionResult result;
  result.text = doc["text"].get<std::string>();
  const std::string finish = doc.value("finish_reason", std::string("length"));
  if (finish != "stop" && finish != "length") {
    throw RunError("unknown finish_reason \"" + finish + "\"");
  }
  result.ended = finish == "stop";
  if (want_logprobs) {
    if (!doc.contains("token_logprobs") || !doc["token_logprobs"].is_array()) {
      throw RunError("logprobs requested but the response has no token_logprobs");
    }
    try {
      result.token_logprobs = doc["token_logprobs"].get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw RunError(std::string("malformed token_logprobs: ") + e.what());
    }
  }
  return result;
}

CompletionResult RemoteBackend::complete(const CompletionRequest& request) const {
  request.validate();
  if (request.temperature == 0.0 && !options_.supports_greedy) {
    throw ConfigError(name() + " does not support greedy (temperature 0) decoding");
  }
  if (request.want_logprobs && !options_.supports_logprobs) {
    throw ConfigError(name() + " does not report token log-probabilities");
  }

  json payload{{"prompt", request.prompt},
               {"max_tokens", request.max_tokens},
               {"top_p", request.top_p},
               {"temperature", request.temperature},
               {"logprobs", request.want_logprobs}};
  if (request.seed) payload["seed"] = *request.seed;
  const std::string body = payload.dump();

  const auto url = internal::split_url(options_.base_url);
  const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto timeout_us =
      std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - timeout_s);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_failure;
  for (int attempt = 0; attempt <= options_.retry.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.retry.delay(attempt));
    ++attempts_;

    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout_s.count(), timeout_us.count());
    client.set_read_timeout(timeout_s.count(), timeout_us.count());
    auto res = client.Post(url.base_path + "/v1/completions", headers, body, "application/json");

    if (!res) {
      last_failure = "transport failure: " + httplib::to_string(res.error());
    } else if (retryable_status(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw RunError(name() + " rejected the request with HTTP " + std::to_string(res->status) +
                     ": " + res->body);
    } else {
      return parse_completion_response(res->body, request.want_logprobs);
    }
    spdlog::debug("{}: attempt {} failed ({})", name(), attempt + 1, last_failure);
  }
  throw RunError(name() + ": giving up after " + std::to_string(options_.retry.max_retries + 1) +
                 " attempts, last failure: " + last_failure);
}

}  // namespace sampsel::backend
