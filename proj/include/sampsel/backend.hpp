// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sampsel::backend {

/// Identifies which decoding slot a request fills. Never sent over the wire;
/// scripted backends use it to look up their canned answers.
struct RequestOrigin {
  std::string document_id;
  int round = 0;
  int sample = 0;
};

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 128;
  double top_p = 1.0;
  double temperature = 1.0;
  std::optional<std::uint64_t> seed;
  bool want_logprobs = false;
  // Local backends may stop as soon as a second sentence has started. The
  // first-sentence truncation of the result is unaffected.
  bool stop_at_sentence_end = false;
  std::optional<RequestOrigin> origin;

  /// Throws std::invalid_argument unless max_tokens >= 1, top_p in (0, 1]
  /// and temperature >= 0.
  void validate() const;
};

struct CompletionResult {
  std::string text;
  bool ended = false;
  std::optional<std::vector<double>> token_logprobs;

  bool operator==(const CompletionResult&) const = default;
};

class SamplingBackend {
 public:
  virtual ~SamplingBackend() = default;
  virtual std::string name() const = 0;
  virtual bool supports_logprobs() const = 0;
  /// Whether temperature 0 yields argmax decoding.
  virtual bool supports_greedy() const { return false; }
  virtual CompletionResult complete(const CompletionRequest& request) const = 0;
};

using TokenId = std::uint32_t;

/// A backend exposing its full next-token distribution. Text is the
/// generated vocabulary entries joined with single spaces.
class DistributionBackend : public SamplingBackend {
 public:
  virtual const std::vector<std::string>& vocabulary() const = 0;
  virtual TokenId end_token() const = 0;
  /// Probabilities over vocabulary(), summing to 1.
  virtual std::vector<double> next_token_dist(std::string_view prompt,
                                              std::span<const TokenId> prefix) const = 0;

  bool supports_logprobs() const override { return true; }
  bool supports_greedy() const override { return true; }

  /// temperature 0 decodes greedily; otherwise nucleus sampling with the
  /// request's top_p, temperature and seed (0 when absent).
  CompletionResult complete(const CompletionRequest& request) const override;

  std::string detokenize(std::span<const TokenId> tokens) const;
};

/// Validates the request and forwards to the backend.
CompletionResult complete(const SamplingBackend& backend, const CompletionRequest& request);

/// Reduces a completion to its first sentence. ended survives only when no
/// text follows that sentence; token log-probabilities are dropped when
/// anything was cut.
CompletionResult first_sentence(const CompletionResult& result);

/// complete() with stop_at_sentence_end set, followed by first_sentence().
CompletionResult sample_sentence(const SamplingBackend& backend, CompletionRequest request);

/// Highest-probability token at every step (ties: lowest vocabulary index),
/// until END or max_tokens.
CompletionResult greedy_decode(const DistributionBackend& backend, std::string_view prompt,
                               int max_tokens);

/// Top-p sampling: tokens sorted by descending probability (ties by
/// vocabulary index), the shortest prefix reaching mass p kept and
/// renormalized. temperature rescales probabilities as p^(1/T) first.
CompletionResult nucleus_sample(const DistributionBackend& backend, std::string_view prompt,
                                double p, std::uint64_t rng_seed, int max_tokens,
                                double temperature = 1.0, bool stop_at_sentence_end = false);

/// Length-unnormalized log-probability beam search. Beams that emit END are
/// frozen. Returns the best finished beam, or the best unfinished one when
/// none finished within max_tokens.
CompletionResult beam_search(const DistributionBackend& backend, std::string_view prompt,
                             int beams = 5, int max_tokens = 128);

/// Per-request seed from (run seed, document id, round, sample index).
std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view document_id, int round,
                          int sample);

/// Distribution backend defined by a callback. Mostly for tests.
class FunctionDistributionBackend final : public DistributionBackend {
 public:
  using DistFn = std::function<std::vector<double>(std::string_view, std::span<const TokenId>)>;

  FunctionDistributionBackend(std::vector<std::string> vocabulary, TokenId end, DistFn fn,
                              std::string name = "function")
      : vocabulary_(std::move(vocabulary)), end_(end), fn_(std::move(fn)), name_(std::move(name)) {}

  std::string name() const override { return name_; }
  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  TokenId end_token() const override { return end_; }
  std::vector<double> next_token_dist(std::string_view prompt,
                                      std::span<const TokenId> prefix) const override {
    return fn_(prompt, prefix);
  }

 private:
  std::vector<std::string> vocabulary_;
  TokenId end_;
  DistFn fn_;
  std::string name_;
};

/// Replays canned completions: documents[id][round][sample]. The entry "*"
/// serves documents without their own script. Requests past the last
/// scripted round get an empty, ended completion; sample indices wrap.
class ScriptedBackend final : public SamplingBackend {
 public:
  using Rounds = std::vector<std::vector<CompletionResult>>;

  explicit ScriptedBackend(std::map<std::string, Rounds, std::less<>> documents,
                           bool supports_logprobs = false)
      : documents_(std::move(documents)), supports_logprobs_(supports_logprobs) {}

  /// {"supports_logprobs": bool, "documents": {id: [[{"text", "ended",
  /// "token_logprobs"?}, ...], ...]}}. Throws UsageError.
  static std::shared_ptr<ScriptedBackend> from_json_file(const std::string& path);
  static std::shared_ptr<ScriptedBackend> from_json_text(std::string_view text);

  std::string name() const override { return "scripted"; }
  bool supports_logprobs() const override { return supports_logprobs_; }
  CompletionResult complete(const CompletionRequest& request) const override;

 private:
  std::map<std::string, Rounds, std::less<>> documents_;
  bool supports_logprobs_;
};

}  // namespace sampsel::backend
