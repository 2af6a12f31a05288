// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "sampsel/errors.hpp"

namespace sampsel::scoring {
namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw std::out_of_range("sample index out of range");
}

}  // namespace

OverlapScorer::OverlapScorer(std::span<const TokenList> samples) : samples_(samples) {
  sets_.reserve(samples.size());
  for (const auto& sample : samples) {
    sets_.emplace_back(sample.begin(), sample.end());
  }
}

double OverlapScorer::score(std::size_t i, SelfTerm self) const {
  check_index(i, samples_.size());
  const TokenList& tokens = samples_[i];
  if (tokens.empty()) throw DegenerateCandidateError("overlap score of an empty sample");

  long long hits = 0;
  for (const auto& token : tokens) {
    for (const auto& set : sets_) hits += set.contains(token) ? 1 : 0;
  }
  const double with_self = static_cast<double>(hits) / static_cast<double>(tokens.size());
  // The self term contributes exactly m_i hits. Subtracting 1.0 afterwards is
  // exact in binary floating point, unlike dividing the reduced count.
  return self == SelfTerm::kExclude ? with_self - 1.0 : with_self;
}

double overlap_score(std::size_t i, std::span<const TokenList> samples, SelfTerm self) {
  return OverlapScorer(samples).score(i, self);
}

double unigram_nll_score(std::size_t i, std::span<const TokenList> samples,
                         Aggregation aggregation) {
  if (samples.size() < 2) throw std::invalid_argument("unigram score needs at least two samples");
  check_index(i, samples.size());
  if (samples[i].empty()) throw DegenerateCandidateError("unigram score of an empty sample");

  std::unordered_set<std::string_view> vocabulary;
  std::unordered_map<std::string_view, long long> other_counts;
  long long other_total = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    for (const auto& token : samples[k]) {
      vocabulary.insert(token);
      if (k != i) {
        ++other_counts[token];
        ++other_total;
      }
    }
  }

  const double denominator = static_cast<double>(other_total + static_cast<long long>(vocabulary.size()));
  double sum = 0.0;
  double worst = 0.0;
  for (const auto& token : samples[i]) {
    auto it = other_counts.find(token);
    const long long count = it == other_counts.end() ? 0 : it->second;
    const double nll = -std::log(static_cast<double>(count + 1) / denominator);
    sum += nll;
    worst = std::max(worst, nll);
  }
  return aggregation == Aggregation::kMax ? worst : sum / static_cast<double>(samples[i].size());
}

double mean_logprob(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) throw DegenerateCandidateError("mean log-probability of an empty sequence");
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (lp > 0.0) throw std::invalid_argument("log-probabilities must be <= 0");
    sum += lp;
  }
  return sum / static_cast<double>(token_logprobs.size());
}

int agreement_score(std::size_t i, std::span<const std::string> responses,
                    const EntailmentPredicate& predicate) {
  check_index(i, responses.size());
  int agreeing = 0;
  for (std::size_t k = 0; k < responses.size(); ++k) {
    if (k == i) continue;
    try {
      if (predicate.entails(responses[i], responses[k]) &&
          predicate.entails(responses[k], responses[i])) {
        ++agreeing;
      }
    } catch (const ScorerError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScorerError(predicate.name() + ": " + e.what());
    }
  }
  return agreeing;
}

std::optional<std::size_t> argmax(std::span<const double> values, std::span<const bool> eligible) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!eligible[k]) continue;
    if (!best || values[k] > values[*best]) best = k;
  }
  return best;
}

std::optional<std::size_t> argmin(std::span<const double> values, std::span<const bool> eligible) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!eligible[k]) continue;
    if (!best || values[k] < values[*best]) best = k;
  }
  return best;
}

}  // namespace sampsel::scoring
