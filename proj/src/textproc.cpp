// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/textproc.hpp"

#include <algorithm>

namespace sampsel::textproc {
namespace {

bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_alpha(char c) { return is_ascii_lower(c) || is_ascii_upper(c); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Bytes of multi-byte UTF-8 sequences count as word characters so that
// non-ASCII letters survive edge stripping.
bool is_word_char(char c) {
  return is_ascii_alpha(c) || is_ascii_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

std::string replace_all(std::string_view text, std::string_view needle) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = text.find(needle, pos);
    if (hit == std::string_view::npos) {
      out.append(text.substr(pos));
      return out;
    }
    out.append(text.substr(pos, hit - pos));
    pos = hit + needle.size();
  }
}

bool ends_abbreviation(std::string_view text, std::size_t terminator) {
  std::size_t begin = terminator;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  std::string_view word = text.substr(begin, terminator + 1 - begin);
  // Opening brackets and quotes do not belong to the abbreviation.
  while (!word.empty() && !is_word_char(word.front())) word.remove_prefix(1);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), word) !=
         std::end(kAbbreviations);
}

bool is_boundary(std::string_view text, std::size_t i) {
  if (!is_terminator(text[i])) return false;
  std::size_t next = i + 1;
  if (next == text.size()) return true;
  if (!is_space(text[next])) return false;
  while (next < text.size() && is_space(text[next])) ++next;
  if (next != text.size() && !is_ascii_upper(text[next])) return false;
  return !ends_abbreviation(text, i);
}

void push_trimmed(std::string_view text, std::size_t begin, std::size_t end,
                  std::vector<SentenceSpan>& out) {
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin < end) out.push_back({std::string(text.substr(begin, end - begin)), begin, end});
}

}  // namespace

std::string clean_article(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() + text.size() / 16);
  for (std::size_t i = 0; i < text.size(); ++i) {
    spaced.push_back(text[i]);
    if (text[i] == '.' && i + 1 < text.size() && is_ascii_alpha(text[i + 1])) {
      spaced.push_back(' ');
      spaced.push_back(text[++i]);
    }
  }

  std::string split;
  split.reserve(spaced.size() + spaced.size() / 16);
  for (std::size_t i = 0; i < spaced.size(); ++i) {
    split.push_back(spaced[i]);
    if (is_ascii_lower(spaced[i]) && i + 1 < spaced.size() && is_ascii_upper(spaced[i + 1])) {
      split.push_back(' ');
      split.push_back(spaced[++i]);
    }
  }

  return replace_all(split, kShareBoilerplate);
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_boundary(text, i)) {
      push_trimmed(text, begin, i + 1, spans);
      begin = i + 1;
    }
  }
  push_trimmed(text, begin, text.size(), spans);
  return spans;
}

std::vector<std::string> sentence_texts(std::string_view text) {
  std::vector<std::string> out;
  for (auto& span : split_sentences(text)) out.push_back(std::move(span.text));
  return out;
}

std::vector<std::string> word_tokens(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    std::string_view piece = sentence.substr(i, j - i);
    while (!piece.empty() && !is_word_char(piece.front())) piece.remove_prefix(1);
    while (!piece.empty() && !is_word_char(piece.back())) piece.remove_suffix(1);
    if (!piece.empty()) {
      std::string folded(piece);
      for (char& c : folded) {
        if (is_ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
      }
      tokens.push_back(std::move(folded));
    }
    i = j;
  }
  return tokens;
}

std::string join_words(const std::vector<std::string>& words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.append(sep);
    out.append(words[i]);
  }
  return out;
}

}  // namespace sampsel::textproc
