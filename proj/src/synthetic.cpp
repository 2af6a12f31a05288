// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "sampsel/textproc.hpp"

namespace sampsel::backend {
namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "dr", "kr", "st", "tr", "v"};
constexpr std::string_view kNuclei[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou"};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string pseudo_word(std::mt19937_64& rng) {
  std::string word;
  const int syllables = 2 + static_cast<int>(rng() % 2);
  for (int s = 0; s < syllables; ++s) {
    word += kOnsets[rng() % std::size(kOnsets)];
    word += kNuclei[rng() % std::size(kNuclei)];
  }
  word.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(word.front())));
  return word;
}

}  // namespace

SyntheticHallucinationBackend::SyntheticHallucinationBackend(std::vector<Fact> facts,
                                                             double fidelity, int decoys,
                                                             std::uint64_t seed, std::string marker)
    : facts_(std::move(facts)), fidelity_(fidelity), decoy_count_(decoys), marker_(std::move(marker)) {
  if (!(fidelity > 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must be in (0, 1]");
  if (decoys < 1) throw std::invalid_argument("decoys must be >= 1");

  end_ = intern("</s>");
  std::mt19937_64 rng(seed);
  for (const Fact& fact : facts_) {
    if (fact.truth.empty()) throw std::invalid_argument("fact without a true value");
    std::set<std::string> taken;
    for (const auto& w : fact.before) taken.insert(lower(w));
    for (const auto& w : fact.after) taken.insert(lower(w));
    taken.insert(lower(fact.truth));

    auto& values = decoys_.emplace_back();
    while (values.size() < static_cast<std::size_t>(decoys)) {
      std::string candidate = pseudo_word(rng);
      if (taken.insert(lower(candidate)).second) values.push_back(std::move(candidate));
    }

    const std::string slot_suffix = fact.after.empty() ? "." : "";
    Sentence sentence;
    for (const auto& w : fact.before) sentence.tokens.push_back(intern(w));
    sentence.slot.position = sentence.tokens.size();
    sentence.slot.truth = intern(fact.truth + slot_suffix);
    sentence.tokens.push_back(sentence.slot.truth);
    for (const auto& value : values) sentence.slot.decoys.push_back(intern(value + slot_suffix));
    for (const auto& w : fact.after) sentence.tokens.push_back(intern(w));
    sentences_.push_back(std::move(sentence));
  }
}

TokenId SyntheticHallucinationBackend::intern(const std::string& word) {
  auto it = std::find(vocabulary_.begin(), vocabulary_.end(), word);
  if (it != vocabulary_.end()) return static_cast<TokenId>(it - vocabulary_.begin());
  vocabulary_.push_back(word);
  return static_cast<TokenId>(vocabulary_.size() - 1);
}

std::size_t SyntheticHallucinationBackend::facts_in_prompt(std::string_view prompt) const {
  const std::size_t at = prompt.rfind(marker_);
  if (at == std::string_view::npos) return 0;
  std::size_t complete = 0;
  for (const auto& span : textproc::split_sentences(prompt.substr(at + marker_.size()))) {
    const char last = span.text.back();
    if (last == '.' || last == '!' || last == '?') ++complete;
  }
  return complete;
}

std::vector<double> SyntheticHallucinationBackend::next_token_dist(
    std::string_view prompt, std::span<const TokenId> prefix) const {
  std::size_t sentence = facts_in_prompt(prompt);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < prefix.size() && sentence < sentences_.size(); ++k) {
    if (++offset == sentences_[sentence].tokens.size()) {
      ++sentence;
      offset = 0;
    }
  }

  std::vector<double> dist(vocabulary_.size(), 0.0);
  if (sentence >= sentences_.size()) {
    dist[end_] = 1.0;
    return dist;
  }
  const Sentence& current = sentences_[sentence];
  if (offset != current.slot.position) {
    dist[current.tokens[offset]] = 1.0;
    return dist;
  }
  const double decoy_mass = (1.0 - fidelity_) / static_cast<double>(decoy_count_);
  dist[current.slot.truth] += fidelity_;
  for (TokenId d : current.slot.decoys) dist[d] += decoy_mass;
  return dist;
}

std::vector<Fact> SyntheticHallucinationBackend::facts_from_article(std::string_view article) {
  std::vector<Fact> facts;
  for (const auto& span : textproc::split_sentences(article)) {
    std::vector<std::string> words;
    std::size_t i = 0;
    const std::string& s = span.text;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i) words.emplace_back(s.substr(i, j - i));
      i = j;
    }
    if (words.size() < 2) continue;
    std::string last = words.back();
    while (!last.empty() && std::ispunct(static_cast<unsigned char>(last.back()))) last.pop_back();
    if (last.empty()) continue;
    words.pop_back();
    facts.push_back({std::move(words), std::move(last), {}});
  }
  return facts;
}

}  // namespace sampsel::backend
