// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sampsel/backend.hpp"

namespace sampsel::backend {

/// One templated sentence with a single fact slot:
///   before... SLOT after...
/// The sentence ends with a period, carried by the last word of `after`,
/// or by the slot word itself when `after` is empty.
struct Fact {
  std::vector<std::string> before;
  std::string truth;
  std::vector<std::string> after;
};

/// Test rig for consistency-based decoding. The response is the facts'
/// sentences in order, then END. Template words are emitted with
/// probability 1; each slot emits the true value with probability
/// `fidelity` and otherwise one of `decoys` decoy values uniformly.
///
/// The backend conditions on the prompt by counting the sentences that
/// follow the last occurrence of `marker` ("Summary:" by default): that many
/// facts are considered already written.
class SyntheticHallucinationBackend final : public DistributionBackend {
 public:
  SyntheticHallucinationBackend(std::vector<Fact> facts, double fidelity, int decoys,
                                std::uint64_t seed, std::string marker = "Summary:");

  std::string name() const override { return "synthetic"; }
  const std::vector<std::string>& vocabulary() const override { return vocabulary_; }
  TokenId end_token() const override { return end_; }
  std::vector<double> next_token_dist(std::string_view prompt,
                                      std::span<const TokenId> prefix) const override;

  const std::vector<Fact>& facts() const { return facts_; }
  /// Decoy surface forms for fact f (without any trailing period).
  const std::vector<std::string>& decoy_values(std::size_t f) const { return decoys_.at(f); }

  /// Facts built from an article: every sentence of two or more words
  /// becomes a fact whose slot is its final word.
  static std::vector<Fact> facts_from_article(std::string_view article);

 private:
  struct Slot {
    std::size_t position;
    TokenId truth;
    std::vector<TokenId> decoys;
  };
  struct Sentence {
    std::vector<TokenId> tokens;  // template tokens; the slot entry holds the truth
    Slot slot;
  };

  TokenId intern(const std::string& word);
  std::size_t facts_in_prompt(std::string_view prompt) const;

  std::vector<Fact> facts_;
  std::vector<std::vector<std::string>> decoys_;
  double fidelity_;
  int decoy_count_;
  std::string marker_;
  std::vector<std::string> vocabulary_;
  std::vector<Sentence> sentences_;
  TokenId end_ = 0;
};

}  // namespace sampsel::backend
