// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sampsel/backend.hpp"
#include "sampsel/errors.hpp"
#include "sampsel/grammar.hpp"
#include "sampsel/scoring.hpp"

namespace sampsel::decoder {

enum class Method {
  kSampleSelect,
  kIndependent,
  kSelfcheckSelect,
  kPcrr,
  kScrr,
  kGreedy,
  kNucleus,
  kBeam,
};

std::string_view to_string(Method method);
/// Throws ConfigError on unknown names.
Method method_from_string(std::string_view name);

enum class StopReason { kSampleEnded, kAbortedAllFiltered, kMaxSentences };

std::string_view to_string(StopReason reason);
StopReason stop_reason_from_string(std::string_view name);

inline constexpr std::string_view kDefaultPromptTemplate =
    "Summarize the following article:\n{article}\nSummary:";

struct GenerationConfig {
  int n = 5;
  double top_p = 0.9;
  double temperature = 1.0;
  int max_sentence_tokens = 128;
  int max_sentences = 20;
  std::uint64_t seed = 0;
  Method method = Method::kSampleSelect;
  std::string prompt_template{kDefaultPromptTemplate};
  /// Placed between the filled template and each chosen sentence.
  std::string joiner = " ";
  int beams = 5;
  /// Candidates fetched concurrently per round; 1 fetches sequentially.
  int sample_workers = 1;
  scoring::Aggregation selfcheck_aggregation = scoring::Aggregation::kMean;

  /// Throws ConfigError when a field is out of range or the template does
  /// not contain "{article}" exactly once.
  void validate() const;
};

struct RoundTrace {
  int round_index = 0;
  std::vector<ScoredSample> candidates;
  std::optional<std::size_t> chosen;
  bool any_ended = false;
};

struct SummaryTrace {
  std::string document_id;
  Method method = Method::kSampleSelect;
  std::vector<std::string> sentences;
  std::vector<RoundTrace> rounds;
  StopReason stop_reason = StopReason::kSampleEnded;

  /// Sentences joined with single spaces.
  std::string summary() const;
};

/// A backend failure surfacing mid-decode, carrying the rounds completed so
/// far.
class PartialRunError : public RunError {
 public:
  PartialRunError(const std::string& what, SummaryTrace partial)
      : RunError(what), partial_(std::move(partial)) {}
  const SummaryTrace& partial() const { return partial_; }

 private:
  SummaryTrace partial_;
};

/// How the candidates of one round are scored and which extreme wins.
enum class ScorerKind { kNone, kOverlap, kUnigramNll, kMeanLogprob, kAgreement };

std::string_view to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(std::string_view name);
ScorerKind scorer_for(Method method);

/// Fills candidate scores from their tokens, texts or log-probabilities and
/// returns the winner. Candidates must already carry their filtered flags;
/// filtered candidates get score 0 and never win. Degenerate candidates
/// (no tokens; no log-probabilities for kMeanLogprob) are marked filtered.
/// Overlap and agreement pick the maximum, unigram NLL the minimum; ties go
/// to the lowest index. kNone scores everything 0 and picks the first
/// unfiltered candidate.
std::optional<std::size_t> score_round(ScorerKind kind, std::vector<ScoredSample>& candidates,
                                       scoring::Aggregation aggregation = scoring::Aggregation::kMean,
                                       const scoring::EntailmentPredicate* entailment = nullptr);

/// Filled template, then every chosen sentence, each preceded by the joiner.
std::string build_prompt(const GenerationConfig& cfg, std::string_view article,
                         std::span<const std::string> chosen);

/// Everything a decoding run talks to.
struct DecodeServices {
  const backend::SamplingBackend& backend;
  const grammar::ParseProvider& parser;
  /// Used by S-CRR; exact string match when null.
  const scoring::EntailmentPredicate* entailment = nullptr;
};

/// Sentence-by-sentence sampling with token-overlap voting: each round draws
/// n first-sentence samples conditioned on the sentences chosen so far,
/// zeroes candidates failing the grammar filter, and keeps the overlap-score
/// argmax. Stops after the round in which any sample ended, after
/// max_sentences rounds, or aborts when every candidate was filtered.
SummaryTrace sample_and_select(std::string_view document_id, std::string_view article,
                               const GenerationConfig& cfg, const DecodeServices& services);

/// Draws n whole responses and votes per sentence position without
/// re-conditioning. Stops at the first position with fewer than min(2, n)
/// contributing responses, or at max_sentences.
SummaryTrace independent_select(std::string_view document_id, std::string_view article,
                                const GenerationConfig& cfg, const DecodeServices& services);

/// The sample_and_select loop, selecting the lowest unigram NLL. Candidates
/// failing the grammar filter are excluded from selection. Needs n >= 2.
SummaryTrace selfcheck_select(std::string_view document_id, std::string_view article,
                              const GenerationConfig& cfg, const DecodeServices& services);

/// Draws n whole responses and keeps one: highest mean log-probability
/// (P-CRR) or highest bidirectional entailment agreement (S-CRR).
SummaryTrace rerank_responses(std::string_view document_id, std::string_view article,
                              const GenerationConfig& cfg, const DecodeServices& services);

/// One whole response by greedy decoding, nucleus sampling or beam search.
SummaryTrace baseline_decode(std::string_view document_id, std::string_view article,
                             const GenerationConfig& cfg, const DecodeServices& services);

/// Dispatches on cfg.method after cfg.validate() and capability checks.
SummaryTrace decode(std::string_view document_id, std::string_view article,
                    const GenerationConfig& cfg, const DecodeServices& services);

}  // namespace sampsel::decoder
