// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "grammar_corpus.hpp"
#include "oracles.hpp"
#include "sampsel/grammar.hpp"

using namespace sampsel::grammar;

namespace {

const char* kPos[] = {"DT", "NN", "NNS", "VBZ", "VBD", "VBP", "VB", "VBG", "VBN", "MD", "IN", "EX", "PRP"};
const char* kDep[] = {"det", "nsubj", "nsubjpass", "expl", "aux", "auxpass", "ROOT", "dobj", "pobj", "prep"};

Parse random_parse(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pos(0, std::size(kPos) - 1);
  std::uniform_int_distribution<std::size_t> dep(0, std::size(kDep) - 1);
  Parse p;
  for (int i = len(rng); i > 0; --i) p.push_back({"w", kPos[pos(rng)], kDep[dep(rng)]});
  return p;
}

std::vector<oracle::Tag> tags_of(const Parse& p) {
  std::vector<oracle::Tag> tags;
  for (const auto& t : p) tags.push_back({t.pos, t.dep});
  return tags;
}

bool has_dep(const Parse& p, std::string_view dep) {
  return std::any_of(p.begin(), p.end(), [&](const ParseToken& t) { return t.dep == dep; });
}
bool has_pos(const Parse& p, std::string_view pos) {
  return std::any_of(p.begin(), p.end(), [&](const ParseToken& t) { return t.pos == pos; });
}

}  // namespace

TEST_CASE("is_grammatical examples") {
  CHECK(is_grammatical(Parse{{"the", "DT", "det"}, {"cat", "NN", "nsubj"}, {"runs", "VBZ", "ROOT"}}));
  CHECK_FALSE(is_grammatical(Parse{{"in", "IN", "prep"}, {"the", "DT", "det"}, {"park", "NN", "pobj"}}));
  CHECK_FALSE(is_grammatical(Parse{}));
  CHECK(is_grammatical(Parse{{"there", "EX", "expl"}, {"were", "VBD", "ROOT"}, {"delays", "NNS", "attr"}}));
}

TEST_CASE("is_grammatical ignores surfaces") {
  CHECK(is_grammatical(Parse{{"", "X", "nsubj"}, {"", "X", "aux"}}));
  CHECK_FALSE(is_grammatical(Parse{{"runs", "X", "nsubj"}}));
}

TEST_CASE("is_grammatical matches the rule applied by hand") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5000; ++t) {
    const auto p = random_parse(rng, 8);
    CHECK(is_grammatical(p) == oracle::grammatical_by_hand(tags_of(p)));
  }
}

TEST_CASE("is_grammatical is monotone under token addition and order independent") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 3000; ++t) {
    auto p = random_parse(rng, 6);
    const bool before = is_grammatical(p);
    auto extended = p;
    const auto extra = random_parse(rng, 3);
    extended.insert(extended.end(), extra.begin(), extra.end());
    if (before) CHECK(is_grammatical(extended));
    std::shuffle(p.begin(), p.end(), rng);
    CHECK(is_grammatical(p) == before);
  }
}

TEST_CASE("gold corpus agrees with its labels") {
  for (const auto& s : corpus::gold_sentences()) {
    CAPTURE(s.text);
    const auto p = corpus::parse_tagged(s.tagged);
    CHECK(p.size() >= 2);
    CHECK(is_grammatical(p) == s.complete);
  }
}

TEST_CASE("heuristic_parse examples") {
  const auto p = heuristic_parse("She runs daily.");
  CHECK(has_dep(p, "nsubj"));
  CHECK(has_pos(p, "VBZ"));
  CHECK(is_grammatical(p));
  CHECK_FALSE(has_dep(heuristic_parse("Running in the park."), "nsubj"));
  CHECK_FALSE(is_grammatical(heuristic_parse("Running in the park.")));
  CHECK(heuristic_parse("").empty());
}

TEST_CASE("heuristic_parse word lists") {
  CHECK(is_grammatical(heuristic_parse("There were delays.")));
  CHECK(has_dep(heuristic_parse("There were delays."), "expl"));
  CHECK(is_grammatical(heuristic_parse("They have left.")));
  CHECK(is_grammatical(heuristic_parse("We will win.")));
  CHECK(is_grammatical(heuristic_parse("The cat runs.")));
  CHECK(is_grammatical(heuristic_parse("Prices jumped.")));
  CHECK_FALSE(is_grammatical(heuristic_parse("In the park.")));
  CHECK_FALSE(is_grammatical(heuristic_parse("The end.")));
  // Known false positive of the suffix rule: "news" after a content word.
  CHECK(is_grammatical(heuristic_parse("Very good news.")));
  CHECK_FALSE(is_grammatical(heuristic_parse("Sure!")));
}

TEST_CASE("scripted provider") {
  ScriptedParseProvider provider;
  provider.set("A b.", Parse{{"A", "NN", "nsubj"}, {"b", "VBZ", "ROOT"}});
  CHECK(is_grammatical(provider.parse("A b.")));
  CHECK(provider.parse("unknown").empty());
  CHECK(is_grammatical(ScriptedParseProvider::accept_all()->parse("anything")));
  CHECK_FALSE(is_grammatical(ScriptedParseProvider::reject_all()->parse("The cat runs.")));

  ScriptedParseProvider with_fallback({}, [](std::string_view s) { return heuristic_parse(s); });
  CHECK(is_grammatical(with_fallback.parse("She runs.")));
}
