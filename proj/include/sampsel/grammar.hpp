// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sampsel::grammar {

/// One word of a parsed sentence: Penn Treebank POS tag plus dependency label.
struct ParseToken {
  std::string surface;
  std::string pos;
  std::string dep;

  bool operator==(const ParseToken&) const = default;
};

using Parse = std::vector<ParseToken>;

/// Accepts a sentence when the parse has both a subject
/// (dep nsubj / nsubjpass / expl) and a finite-verb signal
/// (pos VBZ / VBD / VBP, or dep aux / auxpass). Only the (pos, dep) pairs
/// matter; an empty parse is rejected.
bool is_grammatical(std::span<const ParseToken> parse);

/// Offline tagger built from closed word lists and suffix rules.
///
/// Pronouns become nsubj and "there" before a finite auxiliary becomes expl.
/// Finite auxiliaries get VBZ/VBP/VBD and modals get MD/aux; a content word
/// right before either is tagged nsubj. A word ending in "-ed" (or on a short
/// list of irregular past forms) becomes VBD, and a word ending in "-s"
/// becomes VBZ, when the word before it is a likely subject (a pronoun or a
/// content word); that content word is then tagged nsubj. A sentence-initial
/// past form is still VBD. Everything else is "X"/"dep".
Parse heuristic_parse(std::string_view sentence);

/// Source of parses for the grammar filter.
class ParseProvider {
 public:
  virtual ~ParseProvider() = default;
  virtual std::string name() const = 0;
  virtual bool remote() const = 0;
  virtual Parse parse(std::string_view sentence) const = 0;
};

class HeuristicParseProvider final : public ParseProvider {
 public:
  std::string name() const override { return "heuristic"; }
  bool remote() const override { return false; }
  Parse parse(std::string_view sentence) const override { return heuristic_parse(sentence); }
};

/// Returns canned parses keyed by exact sentence text. Unknown sentences go
/// to the fallback, or parse as empty (ungrammatical) when none is set.
class ScriptedParseProvider final : public ParseProvider {
 public:
  using Fallback = std::function<Parse(std::string_view)>;

  explicit ScriptedParseProvider(std::map<std::string, Parse, std::less<>> parses = {},
                                 Fallback fallback = {})
      : parses_(std::move(parses)), fallback_(std::move(fallback)) {}

  void set(std::string sentence, Parse parse) { parses_[std::move(sentence)] = std::move(parse); }

  std::string name() const override { return "scripted"; }
  bool remote() const override { return false; }
  Parse parse(std::string_view sentence) const override;

  /// Provider that accepts every sentence (one nsubj + VBZ pair per call).
  static std::shared_ptr<ScriptedParseProvider> accept_all();
  /// Provider that rejects every sentence.
  static std::shared_ptr<ScriptedParseProvider> reject_all();

 private:
  std::map<std::string, Parse, std::less<>> parses_;
  Fallback fallback_;
};

struct RemoteParseOptions {
  std::chrono::milliseconds timeout{5000};
};

/// POST {endpoint}/parse with {"sentence": ...}; returns the service's tokens
/// verbatim. Throws RetryableError on transport failure or non-200 status and
/// ProtocolError on a malformed body.
Parse remote_parse(std::string_view sentence, std::string_view endpoint,
                   const RemoteParseOptions& options = {});

/// remote_parse with fallback to heuristic_parse on any error. Each fallback
/// is logged and counted.
class RemoteParseProvider final : public ParseProvider {
 public:
  explicit RemoteParseProvider(std::string endpoint, RemoteParseOptions options = {});
  ~RemoteParseProvider() override;

  std::string name() const override { return "remote"; }
  bool remote() const override { return true; }
  Parse parse(std::string_view sentence) const override;

  std::size_t fallback_count() const;

 private:
  struct State;
  std::string endpoint_;
  RemoteParseOptions options_;
  std::unique_ptr<State> state_;
};

}  // namespace sampsel::grammar
