// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fuzz_backends.hpp"
#include "oracles.hpp"
#include "sampsel/backend.hpp"
#include "sampsel/errors.hpp"
#include "sampsel/synthetic.hpp"
#include "sampsel/textproc.hpp"

using namespace sampsel;
using namespace sampsel::backend;

namespace {

FunctionDistributionBackend fixed_dist(std::vector<std::string> vocab, std::vector<double> probs) {
  return FunctionDistributionBackend(std::move(vocab), 0,
                                     [probs](std::string_view, std::span<const TokenId>) { return probs; });
}

double path_logprob(const std::vector<double>& logprobs) {
  double s = 0;
  for (double x : logprobs) s += x;
  return s;
}

}  // namespace

TEST_CASE("request validation") {
  CompletionRequest r;
  CHECK_NOTHROW(r.validate());
  r.top_p = 0.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.top_p = 1.0;
  r.max_tokens = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.max_tokens = 1;
  r.temperature = -1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("scripted backend replays its script") {
  ScriptedBackend backend({{"*", {{{"Sure! Here is a summary.", false, std::nullopt}}}}});
  CompletionRequest req;
  const auto r = complete(backend, req);
  CHECK(r.text == "Sure! Here is a summary.");
  CHECK_FALSE(r.ended);

  req.origin = RequestOrigin{"doc", 1, 0};
  const auto past = complete(backend, req);
  CHECK(past.text.empty());
  CHECK(past.ended);
}

TEST_CASE("scripted backend from json") {
  auto backend = ScriptedBackend::from_json_text(R"({
    "supports_logprobs": true,
    "documents": {"d1": [[{"text": "A b.", "ended": true, "token_logprobs": [-0.5, -0.25]},
                          {"text": "C d."}]]}})");
  CHECK(backend->supports_logprobs());
  CompletionRequest req;
  req.want_logprobs = true;
  req.origin = RequestOrigin{"d1", 0, 0};
  auto r = backend->complete(req);
  CHECK(r.text == "A b.");
  CHECK(r.ended);
  CHECK(r.token_logprobs == std::vector<double>{-0.5, -0.25});
  req.origin->sample = 3;  // wraps to sample 1
  CHECK(backend->complete(req).text == "C d.");
  req.want_logprobs = false;
  req.origin->sample = 0;
  CHECK_FALSE(backend->complete(req).token_logprobs.has_value());

  CHECK_THROWS_AS(ScriptedBackend::from_json_text("{"), UsageError);
  CHECK_THROWS_AS(ScriptedBackend::from_json_text(R"({"documents": {"d": [[{"ended": true}]]}})"), UsageError);
  CHECK_THROWS_AS(ScriptedBackend::from_json_file("/nonexistent/script.json"), UsageError);
}

TEST_CASE("first_sentence truncation") {
  CompletionResult one{"Only one.", true, std::vector<double>{-1.0}};
  CHECK(first_sentence(one) == one);
  const auto cut = first_sentence({"First here. Second there.", true, std::vector<double>{-1, -1, -1, -1}});
  CHECK(cut.text == "First here.");
  CHECK_FALSE(cut.ended);
  CHECK_FALSE(cut.token_logprobs.has_value());
  CHECK(first_sentence({"", true, std::nullopt}).text.empty());
  CHECK(first_sentence({"", true, std::nullopt}).ended);
}

TEST_CASE("derive_seed") {
  CHECK(derive_seed(1, "a", 0, 0) == derive_seed(1, "a", 0, 0));
  std::set<std::uint64_t> seen;
  for (int r = 0; r < 10; ++r) {
    for (int s = 0; s < 10; ++s) seen.insert(derive_seed(7, "doc", r, s));
  }
  seen.insert(derive_seed(8, "doc", 0, 0));
  seen.insert(derive_seed(7, "doc2", 0, 0));
  CHECK(seen.size() == 102);
}

TEST_CASE("greedy examples") {
  auto a_mostly = fixed_dist({"</s>", "a"}, {0.1, 0.9});
  const auto r = greedy_decode(a_mostly, "", 4);
  CHECK(r.text == "a a a a");
  CHECK_FALSE(r.ended);
  REQUIRE(r.token_logprobs);
  CHECK(r.token_logprobs->size() == 4);

  auto end_only = fixed_dist({"</s>", "a"}, {1.0, 0.0});
  const auto e = greedy_decode(end_only, "", 4);
  CHECK(e.text.empty());
  CHECK(e.ended);

  // Two-step chain: x (0.7) then y (0.8) then END; the alternative z (0.3)
  // would be followed by END directly.
  FunctionDistributionBackend chain({"</s>", "x", "y", "z"}, 0, [](std::string_view, std::span<const TokenId> p) {
    if (p.empty()) return std::vector<double>{0.0, 0.7, 0.0, 0.3};
    if (p.size() == 1 && p[0] == 1) return std::vector<double>{0.2, 0.0, 0.8, 0.0};
    return std::vector<double>{1.0, 0.0, 0.0, 0.0};
  });
  const auto c = greedy_decode(chain, "", 10);
  CHECK(c.text == "x y");
  CHECK(c.ended);
}

TEST_CASE("greedy tie goes to the lowest vocabulary index") {
  auto tie = fixed_dist({"</s>", "b", "a"}, {0.0, 0.5, 0.5});
  CHECK(greedy_decode(tie, "", 1).text == "b");
}

TEST_CASE("nucleus with p = 1 samples the full distribution") {
  const std::vector<double> probs = {0.1, 0.4, 0.3, 0.15, 0.05};
  auto backend = fixed_dist({"</s>", "a", "b", "c", "d"}, probs);
  const int draws = 10000;
  std::vector<int> counts(probs.size(), 0);
  for (int s = 0; s < draws; ++s) {
    const auto r = nucleus_sample(backend, "", 1.0, derive_seed(99, "freq", 0, s), 1);
    if (r.ended) {
      ++counts[0];
    } else {
      for (std::size_t k = 1; k < probs.size(); ++k) {
        if (backend.vocabulary()[k] == r.text) ++counts[k];
      }
    }
  }
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double sigma = std::sqrt(draws * probs[k] * (1 - probs[k]));
    CAPTURE(k);
    CHECK(std::abs(counts[k] - draws * probs[k]) <= 3 * sigma);
  }
}

TEST_CASE("nucleus keeps only the head when it reaches p") {
  auto backend = fixed_dist({"</s>", "top", "tail"}, {0.0, 0.95, 0.05});
  for (std::uint64_t s = 0; s < 500; ++s) {
    CHECK(nucleus_sample(backend, "", 0.9, s, 3).text == "top top top");
  }
}

TEST_CASE("nucleus is reproducible and temperature sharpens") {
  auto backend = fuzz::random_backend(5);
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(nucleus_sample(*backend, "p", 0.9, s, 30) == nucleus_sample(*backend, "p", 0.9, s, 30));
  }
  auto flat = fixed_dist({"</s>", "a", "b"}, {0.0, 0.6, 0.4});
  int a = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) a += nucleus_sample(flat, "", 1.0, s, 1, 0.05).text == "a";
  CHECK(a > 990);
  CHECK_THROWS_AS(nucleus_sample(flat, "", 1.5, 0, 1), std::invalid_argument);
}

TEST_CASE("complete routes temperature 0 to greedy and strips logprobs unless asked") {
  auto backend = fuzz::random_backend(6);
  CompletionRequest req;
  req.prompt = "x";
  req.temperature = 0.0;
  req.max_tokens = 20;
  auto r = complete(*backend, req);
  CHECK(r.text == greedy_decode(*backend, "x", 20).text);
  CHECK_FALSE(r.token_logprobs.has_value());
  req.want_logprobs = true;
  CHECK(complete(*backend, req).token_logprobs.has_value());
}

TEST_CASE("stopping early at a sentence end does not change the first sentence") {
  for (std::uint64_t b = 0; b < 200; ++b) {
    auto backend = fuzz::random_backend(b);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto full = nucleus_sample(*backend, "q", 0.9, s, 40);
      CompletionRequest req;
      req.prompt = "q";
      req.top_p = 0.9;
      req.seed = s;
      req.max_tokens = 40;
      req.want_logprobs = true;
      const auto early = sample_sentence(*backend, req);
      CHECK(early == first_sentence(full));
    }
  }
}

TEST_CASE("beam search with one beam is greedy decoding") {
  for (std::uint64_t b = 0; b < 200; ++b) {
    auto backend = fuzz::random_backend(b, b % 2 == 1);
    CHECK(beam_search(*backend, "z", 1, 25) == greedy_decode(*backend, "z", 25));
  }
}

TEST_CASE("beam search beats greedy on the adversarial tree") {
  auto tree = fuzz::adversarial_tree();
  const auto greedy = greedy_decode(*tree, "", 5);
  const auto beam = beam_search(*tree, "", 5, 5);
  CHECK(greedy.text == "A C");
  CHECK(beam.text == "B F");
  CHECK(std::exp(path_logprob(*greedy.token_logprobs)) == doctest::Approx(0.21));
  CHECK(std::exp(path_logprob(*beam.token_logprobs)) == doctest::Approx(0.36));
  CHECK(beam_search(*tree, "", 2, 5).text == "B F");

  std::vector<oracle::Path> paths;
  std::vector<TokenId> prefix;
  oracle::enumerate_paths([&](const std::vector<TokenId>& p) { return tree->next_token_dist("", p); },
                          0, 5, prefix, 0.0, paths);
  double best = -INFINITY;
  for (const auto& p : paths) {
    if (p.finished) best = std::max(best, p.logprob);
  }
  CHECK(path_logprob(*beam.token_logprobs) == doctest::Approx(best));
  CHECK(path_logprob(*greedy.token_logprobs) < best);
}

TEST_CASE("beam search with END everywhere returns empty text") {
  auto end_only = fixed_dist({"</s>", "a"}, {1.0, 0.0});
  const auto r = beam_search(end_only, "", 5, 10);
  CHECK(r.text.empty());
  CHECK(r.ended);
}

TEST_CASE("a beam wider than the tree finds the best finished path") {
  for (std::uint64_t b = 0; b < 60; ++b) {
    auto backend = fuzz::random_backend(1000 + b);
    const int depth = 3;
    std::vector<oracle::Path> paths;
    std::vector<TokenId> prefix;
    oracle::enumerate_paths([&](const std::vector<TokenId>& p) { return backend->next_token_dist("", p); },
                            0, depth, prefix, 0.0, paths);
    double best = -INFINITY;
    for (const auto& p : paths) {
      if (p.finished) best = std::max(best, p.logprob);
    }

    const auto r = beam_search(*backend, "", 5000, depth);
    REQUIRE(r.ended);
    // Map the words back to ids and add the END step to the score.
    std::vector<TokenId> ids;
    const auto& vocab = backend->vocabulary();
    std::string word;
    for (char c : r.text + " ") {
      if (c != ' ') {
        word.push_back(c);
        continue;
      }
      if (word.empty()) continue;
      ids.push_back(static_cast<TokenId>(std::find(vocab.begin(), vocab.end(), word) - vocab.begin()));
      word.clear();
    }
    const double score = path_logprob(*r.token_logprobs) + std::log(backend->next_token_dist("", ids)[0]);
    CHECK(score == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("synthetic backend") {
  const std::vector<Fact> facts = {{{"The", "capital", "is"}, "Paris", {}},
                                   {{"Its", "mayor", "is"}, "Hidalgo", {"today."}}};
  SyntheticHallucinationBackend truthful(facts, 1.0, 3, 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = nucleus_sample(truthful, "Summary:", 1.0, s, 50);
    CHECK(r.text == "The capital is Paris. Its mayor is Hidalgo today.");
    CHECK(r.ended);
  }
  // The prompt conditions on facts already written.
  CHECK(greedy_decode(truthful, "Summary: The capital is Paris.", 50).text == "Its mayor is Hidalgo today.");
  CHECK(greedy_decode(truthful, "Summary: The capital is Paris. Its mayor is Hidalgo today.", 50).text.empty());

  SyntheticHallucinationBackend noisy(facts, 0.6, 9, 2);
  CHECK(noisy.decoy_values(0).size() == 9);
  std::set<std::string> distinct(noisy.decoy_values(0).begin(), noisy.decoy_values(0).end());
  CHECK(distinct.size() == 9);
  CHECK_FALSE(distinct.count("Paris"));

  int truth = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) {
    const auto r = nucleus_sample(noisy, "Summary:", 1.0, derive_seed(3, "syn", 0, s), 4);
    truth += r.text == "The capital is Paris.";
  }
  CHECK(std::abs(truth / static_cast<double>(draws) - 0.6) <= 0.02);
  CHECK(nucleus_sample(noisy, "Summary:", 1.0, 77, 50) == nucleus_sample(noisy, "Summary:", 1.0, 77, 50));

  SyntheticHallucinationBackend same_seed(facts, 0.6, 9, 2);
  CHECK(same_seed.decoy_values(1) == noisy.decoy_values(1));
  CHECK_THROWS_AS(SyntheticHallucinationBackend(facts, 0.0, 9, 0), std::invalid_argument);
  CHECK_THROWS_AS(SyntheticHallucinationBackend(facts, 0.5, 0, 0), std::invalid_argument);
}

TEST_CASE("facts from an article") {
  const auto facts = SyntheticHallucinationBackend::facts_from_article("The sky is blue. Hi. Rain fell on Monday!");
  REQUIRE(facts.size() == 2);
  CHECK(facts[0].before == std::vector<std::string>{"The", "sky", "is"});
  CHECK(facts[0].truth == "blue");
  CHECK(facts[1].truth == "Monday");
}
