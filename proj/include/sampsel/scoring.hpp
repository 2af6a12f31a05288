// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sampsel {

using TokenList = std::vector<std::string>;

/// One sampled continuation (a sentence, or a whole response for the
/// reranking methods).
struct SampleCandidate {
  std::string text;
  TokenList tokens;
  bool ended = false;
  std::optional<std::vector<double>> token_logprobs;
};

/// A candidate after filtering and scoring. A filtered candidate always
/// carries score 0 and never wins a selection.
struct ScoredSample {
  SampleCandidate candidate;
  double score = 0.0;
  bool filtered = false;
};

}  // namespace sampsel

namespace sampsel::scoring {

enum class SelfTerm { kInclude, kExclude };

/// Token-overlap consistency score over one round of samples.
///
/// score(i) = (1/m_i) * sum_j sum_k [w_i^j in set(s_k)]
///
/// k ranges over every sample, the scored one included, unless kExclude is
/// requested (which lowers every score by exactly 1). Membership ignores
/// repetition counts inside s_k. The integer count is summed first and then
/// divided once by m_i.
class OverlapScorer {
 public:
  explicit OverlapScorer(std::span<const TokenList> samples);

  std::size_t size() const { return samples_.size(); }

  /// Throws DegenerateCandidateError when sample i has no tokens.
  double score(std::size_t i, SelfTerm self = SelfTerm::kInclude) const;

 private:
  std::span<const TokenList> samples_;
  std::vector<std::unordered_set<std::string_view>> sets_;
};

double overlap_score(std::size_t i, std::span<const TokenList> samples,
                     SelfTerm self = SelfTerm::kInclude);

enum class Aggregation { kMean, kMax };

/// Unigram negative log-likelihood of sample i under an add-one smoothed
/// unigram model of the other samples:
///   p(w) = (count_other(w) + 1) / (T_other + |V|)
/// where V is the vocabulary of all n samples. Lower is more consistent.
/// Requires n >= 2.
double unigram_nll_score(std::size_t i, std::span<const TokenList> samples,
                         Aggregation aggregation = Aggregation::kMean);

/// Arithmetic mean of per-token log-probabilities.
double mean_logprob(std::span<const double> token_logprobs);

/// Pairwise entailment judgement used by agreement_score.
class EntailmentPredicate {
 public:
  virtual ~EntailmentPredicate() = default;
  virtual std::string name() const = 0;
  virtual bool entails(std::string_view premise, std::string_view hypothesis) const = 0;
};

/// premise entails hypothesis iff the two strings are identical.
class ExactMatchPredicate final : public EntailmentPredicate {
 public:
  std::string name() const override { return "exact_match"; }
  bool entails(std::string_view premise, std::string_view hypothesis) const override {
    return premise == hypothesis;
  }
};

/// POST {endpoint}/entail {"premise","hypothesis"} -> {"entails": bool}.
/// Any failure is reported as ScorerError.
class HttpEntailmentPredicate final : public EntailmentPredicate {
 public:
  explicit HttpEntailmentPredicate(std::string endpoint, int timeout_ms = 10000)
      : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {}
  std::string name() const override { return "http:" + endpoint_; }
  bool entails(std::string_view premise, std::string_view hypothesis) const override;

 private:
  std::string endpoint_;
  int timeout_ms_;
};

/// Number of other responses k with entails(i, k) and entails(k, i).
int agreement_score(std::size_t i, std::span<const std::string> responses,
                    const EntailmentPredicate& predicate);

/// Index of the largest value among the eligible entries; ties go to the
/// lowest index. nullopt when nothing is eligible.
std::optional<std::size_t> argmax(std::span<const double> values, std::span<const bool> eligible);
std::optional<std::size_t> argmin(std::span<const double> values, std::span<const bool> eligible);

}  // namespace sampsel::scoring
