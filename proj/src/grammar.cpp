// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/grammar.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

#include <spdlog/spdlog.h>

#include "sampsel/errors.hpp"

namespace sampsel::grammar {
namespace {

constexpr std::string_view kSubjectDeps[] = {"nsubj", "nsubjpass", "expl"};
constexpr std::string_view kFiniteVerbTags[] = {"VBZ", "VBD", "VBP"};
constexpr std::string_view kAuxDeps[] = {"aux", "auxpass"};

template <typename Range>
bool contains(const Range& set, std::string_view value) {
  return std::find(std::begin(set), std::end(set), value) != std::end(set);
}

constexpr std::string_view kPronouns[] = {"i", "you", "he", "she", "it", "we", "they", "who"};

struct Aux {
  std::string_view word;
  std::string_view tag;
};
constexpr Aux kAuxiliaries[] = {{"is", "VBZ"},  {"has", "VBZ"}, {"does", "VBZ"}, {"am", "VBP"},
                                {"are", "VBP"}, {"have", "VBP"}, {"do", "VBP"},  {"was", "VBD"},
                                {"were", "VBD"}, {"had", "VBD"}, {"did", "VBD"}};

constexpr std::string_view kModals[] = {"will",   "would", "can",   "could", "shall",
                                        "should", "may",   "might", "must"};

// Common irregular past forms that are rarely nouns or adjectives.
constexpr std::string_view kIrregularPast[] = {
    "met",   "fell",  "said",  "went",  "came",   "took",  "made",    "saw",   "got",
    "gave",  "found", "told",  "rose",  "won",    "ran",   "sat",     "began", "broke",
    "brought", "built", "bought", "chose", "grew", "knew", "led",     "lost",  "paid",
    "sold",  "sent",  "spent", "stood", "thought", "wrote", "became", "fled",  "drove",
    "flew",  "fought", "caught", "taught", "struck", "threw", "wore",  "ate",   "swam"};

// Words that never act as the subject in front of a verb.
constexpr std::string_view kFunctionWords[] = {
    "the",     "a",       "an",     "this",    "that",   "these",   "those",  "my",
    "your",    "his",     "her",    "its",     "our",    "their",   "some",   "any",
    "every",   "each",    "no",     "in",      "on",     "at",      "of",     "to",
    "for",     "with",    "by",     "from",    "into",   "through", "over",   "under",
    "about",   "after",   "before", "during",  "between", "against", "without", "within",
    "near",    "across",  "along",  "around",  "and",    "or",      "but",    "nor",
    "so",      "yet",     "because", "if",     "while",  "when",    "although", "not",
    "very",    "also",    "than",   "as",      "then",   "there"};

bool is_edge_punct(char c) {
  return !std::isalnum(static_cast<unsigned char>(c)) && static_cast<unsigned char>(c) < 0x80;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view aux_tag(std::string_view word) {
  for (const auto& aux : kAuxiliaries) {
    if (aux.word == word) return aux.tag;
  }
  return {};
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool looks_third_person_verb(std::string_view w) {
  return w.size() > 2 && w.back() == 's' && !ends_with(w, "ss") && !ends_with(w, "us") &&
         !ends_with(w, "is");
}

bool looks_past_tense(std::string_view w) {
  return (w.size() > 3 && ends_with(w, "ed")) || contains(kIrregularPast, w);
}

}  // namespace

bool is_grammatical(std::span<const ParseToken> parse) {
  bool subject = false;
  bool verb = false;
  for (const auto& token : parse) {
    subject = subject || contains(kSubjectDeps, token.dep);
    verb = verb || contains(kFiniteVerbTags, token.pos) || contains(kAuxDeps, token.dep);
  }
  return subject && verb;
}

Parse heuristic_parse(std::string_view sentence) {
  Parse parse;
  std::vector<std::string> lowered;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
    std::string_view piece = sentence.substr(i, j - i);
    while (!piece.empty() && is_edge_punct(piece.front())) piece.remove_prefix(1);
    while (!piece.empty() && is_edge_punct(piece.back())) piece.remove_suffix(1);
    if (!piece.empty()) {
      parse.push_back({std::string(piece), "X", "dep"});
      lowered.push_back(lower(piece));
    }
    i = j;
  }

  std::vector<bool> tagged(parse.size(), false);
  auto set = [&](std::size_t k, std::string_view pos, std::string_view dep) {
    parse[k].pos = pos;
    parse[k].dep = dep;
    tagged[k] = true;
  };

  // Closed-class words first.
  for (std::size_t k = 0; k < parse.size(); ++k) {
    const std::string& w = lowered[k];
    if (contains(kPronouns, w)) {
      set(k, w == "who" ? "WP" : "PRP", "nsubj");
    } else if (auto tag = aux_tag(w); !tag.empty()) {
      set(k, tag, "ROOT");
    } else if (contains(kModals, w)) {
      set(k, "MD", "aux");
    } else if (w == "there" && k + 1 < parse.size() && !aux_tag(lowered[k + 1]).empty()) {
      set(k, "EX", "expl");
    }
  }

  auto likely_subject = [&](std::size_t k) {
    return !tagged[k] && !contains(kFunctionWords, lowered[k]) && !looks_past_tense(lowered[k]);
  };

  // A content word directly before a finite auxiliary or modal is its subject.
  for (std::size_t k = 1; k < parse.size(); ++k) {
    const bool finite = parse[k].dep == "aux" || (tagged[k] && parse[k].pos.starts_with("VB"));
    if (finite && likely_subject(k - 1)) set(k - 1, "NN", "nsubj");
  }

  // Open-class verbs by suffix, inferring the subject from the preceding word.
  for (std::size_t k = 0; k < parse.size(); ++k) {
    if (tagged[k]) continue;
    const std::string& w = lowered[k];
    const bool past = looks_past_tense(w);
    if (!past && !looks_third_person_verb(w)) continue;
    if (k == 0) {
      if (past) set(k, "VBD", "ROOT");
      continue;
    }
    const std::size_t prev = k - 1;
    const bool prev_pronoun = parse[prev].dep == "nsubj" && tagged[prev];
    const bool prev_content = likely_subject(prev);
    if (prev_pronoun || prev_content) {
      set(k, past ? "VBD" : "VBZ", "ROOT");
      if (prev_content) set(prev, "NN", "nsubj");
    } else if (past) {
      set(k, "VBD", "ROOT");
    }
  }
  return parse;
}

Parse ScriptedParseProvider::parse(std::string_view sentence) const {
  if (auto it = parses_.find(sentence); it != parses_.end()) return it->second;
  if (fallback_) return fallback_(sentence);
  return {};
}

std::shared_ptr<ScriptedParseProvider> ScriptedParseProvider::accept_all() {
  return std::make_shared<ScriptedParseProvider>(
      std::map<std::string, Parse, std::less<>>{}, [](std::string_view) {
        return Parse{{"it", "PRP", "nsubj"}, {"is", "VBZ", "ROOT"}};
      });
}

std::shared_ptr<ScriptedParseProvider> ScriptedParseProvider::reject_all() {
  return std::make_shared<ScriptedParseProvider>(
      std::map<std::string, Parse, std::less<>>{},
      [](std::string_view) { return Parse{{"fragment", "NN", "ROOT"}}; });
}

struct RemoteParseProvider::State {
  std::atomic<std::size_t> fallbacks{0};
};

RemoteParseProvider::RemoteParseProvider(std::string endpoint, RemoteParseOptions options)
    : endpoint_(std::move(endpoint)), options_(options), state_(std::make_unique<State>()) {}

RemoteParseProvider::~RemoteParseProvider() = default;

Parse RemoteParseProvider::parse(std::string_view sentence) const {
  try {
    return remote_parse(sentence, endpoint_, options_);
  } catch (const Error& e) {
    state_->fallbacks.fetch_add(1, std::memory_order_relaxed);
    spdlog::warn("parse service at {} failed ({}); using heuristic parse", endpoint_, e.what());
    return heuristic_parse(sentence);
  }
}

std::size_t RemoteParseProvider::fallback_count() const {
  return state_->fallbacks.load(std::memory_order_relaxed);
}

}  // namespace sampsel::grammar
