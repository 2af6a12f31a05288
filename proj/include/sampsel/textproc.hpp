// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sampsel::textproc {

/// A trimmed sentence and its byte range [start, end) in the source text.
struct SentenceSpan {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const SentenceSpan&) const = default;
};

/// Boilerplate share-button text removed by clean_article.
inline constexpr std::string_view kShareBoilerplate =
    "Share this with Email Facebook Messenger Messenger Twitter Pinterest "
    "Whats App Linked In Copy this link";

/// Closed abbreviation list; a terminator ending one of these never splits.
inline constexpr std::string_view kAbbreviations[] = {
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Jr.", "Sr.",
    "U.S.", "U.K.", "No.", "vs.", "etc.", "e.g.", "i.e."};

/// Repairs run-together article text before it is placed in a prompt.
///
/// One pass of three ordered substitutions:
///   1. a period directly followed by an ASCII letter gains a space after it;
///   2. a lowercase ASCII letter directly followed by an uppercase one gains
///      a space between them;
///   3. every occurrence of kShareBoilerplate is deleted.
/// The result is not guaranteed to be a fixed point.
std::string clean_article(std::string_view text);

/// Rule-based segmentation. A sentence ends at '.', '!' or '?' when the
/// terminator is followed by whitespace and an uppercase letter, or by
/// optional whitespace and end of text, unless the word carrying the
/// terminator is a listed abbreviation. Trailing unterminated text forms the
/// last span.
std::vector<SentenceSpan> split_sentences(std::string_view text);

/// Sentence texts only.
std::vector<std::string> sentence_texts(std::string_view text);

/// Whitespace split, edge punctuation stripped, ASCII case-folded. Pieces with
/// no letter or digit are dropped. Order and duplicates are preserved.
std::vector<std::string> word_tokens(std::string_view sentence);

/// Joins tokens with single spaces.
std::string join_words(const std::vector<std::string>& words, std::string_view sep = " ");

}  // namespace sampsel::textproc
