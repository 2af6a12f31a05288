// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

// Randomly generated distribution backends for property tests.

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sampsel/backend.hpp"

namespace fuzz {

using sampsel::backend::FunctionDistributionBackend;
using sampsel::backend::TokenId;

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

/// A backend whose next-token distribution is a pseudo-random function of
/// (backend seed, prompt, prefix). END (token 0) is likely mostly after a
/// word carrying a period and slowly gains weight with length. Some words are
/// capitalized and some carry a period, so outputs contain several sentences.
/// With `quantized`, weights come from a handful of values and ties are
/// common.
inline std::shared_ptr<FunctionDistributionBackend> random_backend(std::uint64_t seed,
                                                                    bool quantized = false) {
  std::mt19937_64 setup(seed);
  const int words = 3 + static_cast<int>(setup() % 8);
  std::vector<std::string> vocab = {"</s>"};
  for (int w = 0; w < words; ++w) {
    std::string word = "w" + std::to_string(w);
    if (w == 0 || setup() % 2 == 0) word[0] = 'W';
    if (w == 1 || setup() % 3 == 0) word += ".";
    vocab.push_back(word);
  }
  std::vector<bool> period(vocab.size());
  for (std::size_t k = 0; k < vocab.size(); ++k) period[k] = vocab[k].back() == '.';
  auto fn = [seed, quantized, period, size = vocab.size()](std::string_view prompt,
                                                           std::span<const TokenId> prefix) {
    std::uint64_t h = mix(seed, std::hash<std::string_view>{}(prompt));
    for (TokenId t : prefix) h = mix(h, t);
    std::mt19937_64 rng(h);
    std::vector<double> w(size);
    double total = 0;
    for (std::size_t k = 0; k < size; ++k) {
      w[k] = quantized ? static_cast<double>(1 + rng() % 3) : 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
      total += w[k];
    }
    w[0] *= 0.1;
    w[0] += total * 0.002 * static_cast<double>(prefix.size());
    if (!prefix.empty() && period[prefix.back()]) w[0] += total * 0.04;
    total = 0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return w;
  };
  return std::make_shared<FunctionDistributionBackend>(std::move(vocab), 0, fn, "fuzz");
}

/// The tree where greedy decoding is suboptimal:
///   A .6 -> {C .35, D .35, E .3};  B .4 -> {F .9, G .1};  then END.
/// Greedy takes A C (0.21); the best path is B F (0.36).
inline std::shared_ptr<FunctionDistributionBackend> adversarial_tree() {
  std::vector<std::string> vocab = {"</s>", "A", "B", "C", "D", "E", "F", "G"};
  auto fn = [](std::string_view, std::span<const TokenId> prefix) {
    std::vector<double> d(8, 0.0);
    if (prefix.empty()) {
      d[1] = 0.6;
      d[2] = 0.4;
    } else if (prefix.size() == 1 && prefix[0] == 1) {
      d[3] = 0.35;
      d[4] = 0.35;
      d[5] = 0.3;
    } else if (prefix.size() == 1 && prefix[0] == 2) {
      d[6] = 0.9;
      d[7] = 0.1;
    } else {
      d[0] = 1.0;
    }
    return d;
  };
  return std::make_shared<FunctionDistributionBackend>(std::move(vocab), 0, fn, "adversarial");
}

}  // namespace fuzz
