// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <string>

#include "sampsel/backend.hpp"

namespace sampsel::backend {

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before retry number `attempt` (1-based).
  std::chrono::milliseconds delay(int attempt) const;
};

struct RemoteBackendOptions {
  std::string base_url;
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
  bool supports_logprobs = true;
  bool supports_greedy = true;
  /// Sent as a bearer token when non-empty.
  std::string api_key;
};

/// Client for an OpenAI-style completions endpoint.
///
///   POST {base_url}/v1/completions
///   {"prompt", "max_tokens", "top_p", "temperature", "seed"?, "logprobs"}
///   -> {"text", "finish_reason": "stop"|"length", "token_logprobs"?}
///
/// Connection failures, 408, 429 and 5xx responses are retried with
/// exponential backoff; once retries are exhausted, or when the server sends
/// an error payload, RunError is thrown. One HTTP request per complete().
class RemoteBackend final : public SamplingBackend {
 public:
  explicit RemoteBackend(RemoteBackendOptions options);

  std::string name() const override { return "remote:" + options_.base_url; }
  bool supports_logprobs() const override { return options_.supports_logprobs; }
  bool supports_greedy() const override { return options_.supports_greedy; }
  CompletionResult complete(const CompletionRequest& request) const override;

  /// HTTP attempts issued so far, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 private:
  RemoteBackendOptions options_;
  mutable std::atomic<std::size_t> attempts_{0};
};

/// Parses a completions response body. Throws RunError on an error payload
/// or a body that does not match the schema.
CompletionResult parse_completion_response(std::string_view body, bool want_logprobs);

}  // namespace sampsel::backend
