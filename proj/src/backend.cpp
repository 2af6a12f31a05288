// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/backend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sampsel/errors.hpp"
#include "sampsel/textproc.hpp"

namespace sampsel::backend {
namespace {

using json = nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform double in [0, 1) from the top 53 bits, independent of the
// standard library's distribution implementations.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool has_upper(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::vector<double> checked_dist(const DistributionBackend& backend, std::string_view prompt,
                                 std::span<const TokenId> prefix) {
  auto dist = backend.next_token_dist(prompt, prefix);
  if (dist.size() != backend.vocabulary().size()) {
    throw RunError(backend.name() + ": distribution size does not match the vocabulary");
  }
  return dist;
}

// Vocabulary indices ordered by descending probability, ties by index.
std::vector<TokenId> ranked(std::span<const double> probs) {
  std::vector<TokenId> order(probs.size());
  std::iota(order.begin(), order.end(), TokenId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TokenId a, TokenId b) { return probs[a] > probs[b]; });
  return order;
}

TokenId argmax_token(std::span<const double> probs) {
  TokenId best = 0;
  for (TokenId t = 1; t < probs.size(); ++t) {
    if (probs[t] > probs[best]) best = t;
  }
  return best;
}

template <typename Choose>
CompletionResult generate(const DistributionBackend& backend, std::string_view prompt,
                          int max_tokens, bool stop_at_sentence_end, Choose&& choose) {
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  const auto& vocab = backend.vocabulary();
  std::vector<TokenId> prefix;
  std::vector<double> logprobs;
  std::string text;
  bool ended = false;
  for (int step = 0; step < max_tokens; ++step) {
    const auto dist = checked_dist(backend, prompt, prefix);
    const TokenId token = choose(dist);
    if (token == backend.end_token()) {
      ended = true;
      break;
    }
    prefix.push_back(token);
    logprobs.push_back(std::log(dist[token]));
    if (!text.empty()) text.push_back(' ');
    text += vocab[token];
    // A second sentence can only begin inside text carrying an uppercase
    // letter, so the segmenter runs only then.
    if (stop_at_sentence_end && has_upper(vocab[token]) &&
        textproc::split_sentences(text).size() >= 2) {
      break;
    }
  }
  return {std::move(text), ended, std::move(logprobs)};
}

}  // namespace

void CompletionRequest::validate() const {
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
}

CompletionResult DistributionBackend::complete(const CompletionRequest& request) const {
  request.validate();
  CompletionResult result =
      request.temperature == 0.0
          ? greedy_decode(*this, request.prompt, request.max_tokens)
          : nucleus_sample(*this, request.prompt, request.top_p, request.seed.value_or(0),
                           request.max_tokens, request.temperature, request.stop_at_sentence_end);
  if (!request.want_logprobs) result.token_logprobs.reset();
  return result;
}

std::string DistributionBackend::detokenize(std::span<const TokenId> tokens) const {
  std::string text;
  for (TokenId t : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += vocabulary().at(t);
  }
  return text;
}

CompletionResult complete(const SamplingBackend& backend, const CompletionRequest& request) {
  request.validate();
  return backend.complete(request);
}

CompletionResult first_sentence(const CompletionResult& result) {
  auto spans = textproc::split_sentences(result.text);
  if (spans.size() <= 1) {
    CompletionResult out = result;
    out.text = spans.empty() ? std::string() : spans.front().text;
    return out;
  }
  return {std::move(spans.front().text), false, std::nullopt};
}

CompletionResult sample_sentence(const SamplingBackend& backend, CompletionRequest request) {
  request.stop_at_sentence_end = true;
  return first_sentence(complete(backend, request));
}

CompletionResult greedy_decode(const DistributionBackend& backend, std::string_view prompt,
                               int max_tokens) {
  return generate(backend, prompt, max_tokens, false,
                  [](std::span<const double> dist) { return argmax_token(dist); });
}

CompletionResult nucleus_sample(const DistributionBackend& backend, std::string_view prompt,
                                double p, std::uint64_t rng_seed, int max_tokens,
                                double temperature, bool stop_at_sentence_end) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
  if (!(temperature > 0.0)) throw std::invalid_argument("nucleus sampling needs temperature > 0");
  std::mt19937_64 rng(rng_seed);
  std::vector<double> scaled;
  auto choose = [&](std::span<const double> dist) -> TokenId {
    scaled.assign(dist.begin(), dist.end());
    if (temperature != 1.0) {
      double total = 0.0;
      for (double& q : scaled) {
        q = q > 0.0 ? std::pow(q, 1.0 / temperature) : 0.0;
        total += q;
      }
      for (double& q : scaled) q /= total;
    }
    const auto order = ranked(scaled);
    double mass = 0.0;
    std::size_t kept = 0;
    while (kept < order.size() && scaled[order[kept]] > 0.0) {
      mass += scaled[order[kept++]];
      if (mass >= p - 1e-12) break;
    }
    if (kept == 0) throw RunError(backend.name() + ": distribution has no mass");
    const double target = unit_draw(rng) * mass;
    double acc = 0.0;
    for (std::size_t k = 0; k < kept; ++k) {
      acc += scaled[order[k]];
      if (target < acc) return order[k];
    }
    return order[kept - 1];
  };
  return generate(backend, prompt, max_tokens, stop_at_sentence_end, choose);
}

CompletionResult beam_search(const DistributionBackend& backend, std::string_view prompt,
                             int beams, int max_tokens) {
  if (beams < 1) throw std::invalid_argument("beams must be >= 1");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");

  struct Hypothesis {
    std::vector<TokenId> tokens;
    std::vector<double> logprobs;
    double score = 0.0;
    bool finished = false;
  };

  std::vector<Hypothesis> pool(1);
  for (int step = 0; step < max_tokens && !pool.front().finished; ++step) {
    // Candidates are appended parent by parent, children by descending
    // probability, so the stable sort below breaks score ties the same way
    // greedy decoding does.
    std::vector<Hypothesis> candidates;
    for (const auto& hyp : pool) {
      if (hyp.finished) {
        candidates.push_back(hyp);
        continue;
      }
      const auto dist = checked_dist(backend, prompt, hyp.tokens);
      for (TokenId token : ranked(dist)) {
        if (dist[token] <= 0.0) break;
        Hypothesis next = hyp;
        const double lp = std::log(dist[token]);
        next.score += lp;
        if (token == backend.end_token()) {
          next.finished = true;
        } else {
          next.tokens.push_back(token);
          next.logprobs.push_back(lp);
        }
        candidates.push_back(std::move(next));
      }
    }
    if (candidates.empty()) throw RunError(backend.name() + ": distribution has no mass");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Hypothesis& a, const Hypothesis& b) { return a.score > b.score; });
    if (candidates.size() > static_cast<std::size_t>(beams)) candidates.resize(beams);
    pool = std::move(candidates);
  }

  auto best = std::find_if(pool.begin(), pool.end(), [](const Hypothesis& h) { return h.finished; });
  if (best == pool.end()) best = pool.begin();
  return {backend.detokenize(best->tokens), best->finished, best->logprobs};
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view document_id, int round,
                          int sample) {
  std::uint64_t h = splitmix64(run_seed ^ fnv1a64(document_id));
  h = splitmix64(h ^ static_cast<std::uint64_t>(round));
  return splitmix64(h ^ (static_cast<std::uint64_t>(sample) << 32));
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) const {
  const RequestOrigin origin = request.origin.value_or(RequestOrigin{});
  auto doc = documents_.find(origin.document_id);
  if (doc == documents_.end()) doc = documents_.find("*");
  if (doc == documents_.end() || origin.round < 0 ||
      static_cast<std::size_t>(origin.round) >= doc->second.size() ||
      doc->second[origin.round].empty()) {
    return {"", true, std::nullopt};
  }
  const auto& round = doc->second[origin.round];
  CompletionResult result = round[static_cast<std::size_t>(origin.sample) % round.size()];
  if (!request.want_logprobs) result.token_logprobs.reset();
  return result;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json_text(std::string_view text) {
  try {
    const json doc = json::parse(text);
    std::map<std::string, Rounds, std::less<>> documents;
    for (const auto& [id, rounds] : doc.at("documents").items()) {
      Rounds parsed;
      for (const auto& round : rounds) {
        auto& samples = parsed.emplace_back();
        for (const auto& sample : round) {
          CompletionResult r;
          r.text = sample.at("text").get<std::string>();
          r.ended = sample.value("ended", false);
          if (sample.contains("token_logprobs")) {
            r.token_logprobs = sample["token_logprobs"].get<std::vector<double>>();
          }
          samples.push_back(std::move(r));
        }
      }
      documents.emplace(id, std::move(parsed));
    }
    return std::make_shared<ScriptedBackend>(std::move(documents),
                                             doc.value("supports_logprobs", false));
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed backend script: ") + e.what());
  }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read backend script " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace sampsel::backend
