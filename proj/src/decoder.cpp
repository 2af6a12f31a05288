// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/decoder.hpp"

#include <algorithm>
#include <future>

#include "sampsel/textproc.hpp"

namespace sampsel::decoder {
namespace {

using backend::CompletionRequest;
using backend::CompletionResult;
using backend::RequestOrigin;

struct MethodName {
  Method method;
  std::string_view name;
};
constexpr MethodName kMethodNames[] = {
    {Method::kSampleSelect, "sample_select"}, {Method::kIndependent, "independent"},
    {Method::kSelfcheckSelect, "selfcheck_select"}, {Method::kPcrr, "pcrr"},
    {Method::kScrr, "scrr"}, {Method::kGreedy, "greedy"},
    {Method::kNucleus, "nucleus"}, {Method::kBeam, "beam"}};

struct StopName {
  StopReason reason;
  std::string_view name;
};
constexpr StopName kStopNames[] = {{StopReason::kSampleEnded, "sample_ended"},
                                   {StopReason::kAbortedAllFiltered, "aborted_all_filtered"},
                                   {StopReason::kMaxSentences, "max_sentences"}};

struct ScorerName {
  ScorerKind kind;
  std::string_view name;
};
constexpr ScorerName kScorerNames[] = {{ScorerKind::kNone, "none"},
                                       {ScorerKind::kOverlap, "overlap"},
                                       {ScorerKind::kUnigramNll, "unigram_nll"},
                                       {ScorerKind::kMeanLogprob, "mean_logprob"},
                                       {ScorerKind::kAgreement, "agreement"}};

// Runs fn(k) for k in [0, count), at most `workers` at a time; results keep
// index order.
template <typename Fn>
std::vector<ScoredSample> gather(int count, int workers, Fn&& fn) {
  std::vector<ScoredSample> out(static_cast<std::size_t>(count));
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  for (int start = 0; start < count; start += workers) {
    const int stop = std::min(count, start + workers);
    std::vector<std::future<ScoredSample>> pending;
    for (int k = start; k < stop; ++k) pending.push_back(std::async(std::launch::async, fn, k));
    for (int k = start; k < stop; ++k) out[k] = pending[k - start].get();
  }
  return out;
}

bool passes_grammar(const grammar::ParseProvider& parser, const std::string& text) {
  const auto parse = parser.parse(text);
  return grammar::is_grammatical(parse);
}

ScoredSample to_candidate(CompletionResult result) {
  ScoredSample sample;
  sample.candidate.text = std::move(result.text);
  sample.candidate.tokens = textproc::word_tokens(sample.candidate.text);
  sample.candidate.ended = result.ended;
  sample.candidate.token_logprobs = std::move(result.token_logprobs);
  return sample;
}

int response_token_cap(const GenerationConfig& cfg) {
  const long long cap = static_cast<long long>(cfg.max_sentences) * cfg.max_sentence_tokens;
  return static_cast<int>(std::min<long long>(cap, 1 << 30));
}

CompletionRequest make_request(const GenerationConfig& cfg, std::string prompt,
                               std::string_view document_id, int round, int sample,
                               int max_tokens) {
  CompletionRequest req;
  req.prompt = std::move(prompt);
  req.max_tokens = max_tokens;
  req.top_p = cfg.top_p;
  req.temperature = cfg.temperature;
  req.seed = backend::derive_seed(cfg.seed, document_id, round, sample);
  req.origin = RequestOrigin{std::string(document_id), round, sample};
  return req;
}

SummaryTrace iterate_sentences(std::string_view document_id, std::string_view article,
                               const GenerationConfig& cfg, const DecodeServices& services,
                               ScorerKind scorer) {
  SummaryTrace trace;
  trace.document_id = std::string(document_id);
  trace.method = cfg.method;

  for (int round = 0;; ++round) {
    const std::string prompt = build_prompt(cfg, article, trace.sentences);
    RoundTrace rt;
    rt.round_index = round;
    try {
      rt.candidates = gather(cfg.n, cfg.sample_workers, [&](int k) {
        auto req = make_request(cfg, prompt, document_id, round, k, cfg.max_sentence_tokens);
        ScoredSample sample = to_candidate(backend::sample_sentence(services.backend, req));
        sample.filtered = sample.candidate.tokens.empty() ||
                          !passes_grammar(services.parser, sample.candidate.text);
        return sample;
      });
    } catch (const RunError& e) {
      throw PartialRunError(e.what(), trace);
    }
    rt.any_ended = std::any_of(rt.candidates.begin(), rt.candidates.end(),
                               [](const ScoredSample& s) { return s.candidate.ended; });
    rt.chosen = score_round(scorer, rt.candidates, cfg.selfcheck_aggregation, services.entailment);
    trace.rounds.push_back(rt);

    if (!rt.chosen) {
      trace.stop_reason = StopReason::kAbortedAllFiltered;
      break;
    }
    trace.sentences.push_back(rt.candidates[*rt.chosen].candidate.text);
    if (rt.any_ended) {
      trace.stop_reason = StopReason::kSampleEnded;
      break;
    }
    if (static_cast<int>(trace.sentences.size()) >= cfg.max_sentences) {
      trace.stop_reason = StopReason::kMaxSentences;
      break;
    }
  }
  return trace;
}

std::vector<ScoredSample> draw_responses(std::string_view document_id, std::string_view article,
                                         const GenerationConfig& cfg,
                                         const DecodeServices& services, bool want_logprobs) {
  const std::string prompt = build_prompt(cfg, article, {});
  SummaryTrace partial;
  partial.document_id = std::string(document_id);
  partial.method = cfg.method;
  try {
    return gather(cfg.n, cfg.sample_workers, [&](int k) {
      auto req = make_request(cfg, prompt, document_id, 0, k, response_token_cap(cfg));
      req.want_logprobs = want_logprobs;
      return to_candidate(backend::complete(services.backend, req));
    });
  } catch (const RunError& e) {
    throw PartialRunError(e.what(), partial);
  }
}

// Records a single whole-response selection round.
SummaryTrace single_round(std::string_view document_id, const GenerationConfig& cfg,
                          std::vector<ScoredSample> candidates, std::optional<std::size_t> chosen) {
  SummaryTrace trace;
  trace.document_id = std::string(document_id);
  trace.method = cfg.method;
  RoundTrace rt;
  rt.round_index = 0;
  rt.any_ended = std::any_of(candidates.begin(), candidates.end(),
                             [](const ScoredSample& s) { return s.candidate.ended; });
  rt.candidates = std::move(candidates);
  rt.chosen = chosen;
  if (!chosen) {
    trace.stop_reason = StopReason::kAbortedAllFiltered;
  } else {
    const auto& winner = rt.candidates[*chosen].candidate;
    trace.sentences = textproc::sentence_texts(winner.text);
    const bool truncated = static_cast<int>(trace.sentences.size()) > cfg.max_sentences;
    if (truncated) trace.sentences.resize(static_cast<std::size_t>(cfg.max_sentences));
    trace.stop_reason = winner.ended && !truncated ? StopReason::kSampleEnded
                                                   : StopReason::kMaxSentences;
  }
  trace.rounds.push_back(std::move(rt));
  return trace;
}

void require_pairs(const GenerationConfig& cfg, std::string_view what) {
  if (cfg.n < 2) throw ConfigError(std::string(what) + " needs n >= 2");
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& m : kMethodNames) {
    if (m.method == method) return m.name;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& m : kMethodNames) {
    if (m.name == name) return m.method;
  }
  throw ConfigError("unknown method \"" + std::string(name) + "\"");
}

std::string_view to_string(StopReason reason) {
  for (const auto& s : kStopNames) {
    if (s.reason == reason) return s.name;
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view name) {
  for (const auto& s : kStopNames) {
    if (s.name == name) return s.reason;
  }
  throw UsageError("unknown stop reason \"" + std::string(name) + "\"");
}

std::string_view to_string(ScorerKind kind) {
  for (const auto& s : kScorerNames) {
    if (s.kind == kind) return s.name;
  }
  return "unknown";
}

ScorerKind scorer_kind_from_string(std::string_view name) {
  for (const auto& s : kScorerNames) {
    if (s.name == name) return s.kind;
  }
  throw UsageError("unknown scorer \"" + std::string(name) + "\"");
}

ScorerKind scorer_for(Method method) {
  switch (method) {
    case Method::kSampleSelect:
    case Method::kIndependent:
      return ScorerKind::kOverlap;
    case Method::kSelfcheckSelect:
      return ScorerKind::kUnigramNll;
    case Method::kPcrr:
      return ScorerKind::kMeanLogprob;
    case Method::kScrr:
      return ScorerKind::kAgreement;
    default:
      return ScorerKind::kNone;
  }
}

void GenerationConfig::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1]");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (max_sentence_tokens < 1) throw ConfigError("max_sentence_tokens must be >= 1");
  if (max_sentences < 1) throw ConfigError("max_sentences must be >= 1");
  if (beams < 1) throw ConfigError("beams must be >= 1");
  if (sample_workers < 1) throw ConfigError("sample_workers must be >= 1");
  const auto first = prompt_template.find("{article}");
  if (first == std::string::npos || prompt_template.find("{article}", first + 1) != std::string::npos) {
    throw ConfigError("prompt template must contain {article} exactly once");
  }
}

std::string SummaryTrace::summary() const { return textproc::join_words(sentences); }

std::string build_prompt(const GenerationConfig& cfg, std::string_view article,
                         std::span<const std::string> chosen) {
  std::string prompt = cfg.prompt_template;
  const auto at = prompt.find("{article}");
  if (at != std::string::npos) prompt.replace(at, std::string_view("{article}").size(), article);
  for (const auto& sentence : chosen) {
    prompt += cfg.joiner;
    prompt += sentence;
  }
  return prompt;
}

std::optional<std::size_t> score_round(ScorerKind kind, std::vector<ScoredSample>& candidates,
                                       scoring::Aggregation aggregation,
                                       const scoring::EntailmentPredicate* entailment) {
  std::vector<TokenList> token_lists;
  std::vector<std::string> texts;
  for (auto& c : candidates) {
    if (c.candidate.tokens.empty()) c.filtered = true;
    if (kind == ScorerKind::kMeanLogprob &&
        (!c.candidate.token_logprobs || c.candidate.token_logprobs->empty())) {
      c.filtered = true;
    }
    token_lists.push_back(c.candidate.tokens);
    texts.push_back(c.candidate.text);
  }

  std::vector<double> scores(candidates.size(), 0.0);
  std::unique_ptr<bool[]> eligible(new bool[candidates.size()]);
  for (std::size_t k = 0; k < candidates.size(); ++k) eligible[k] = !candidates[k].filtered;

  const scoring::ExactMatchPredicate exact;
  const scoring::EntailmentPredicate& predicate = entailment ? *entailment : exact;
  std::optional<scoring::OverlapScorer> overlap;
  if (kind == ScorerKind::kOverlap) overlap.emplace(token_lists);

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!eligible[k]) continue;
    switch (kind) {
      case ScorerKind::kOverlap:
        scores[k] = overlap->score(k);
        break;
      case ScorerKind::kUnigramNll:
        scores[k] = scoring::unigram_nll_score(k, token_lists, aggregation);
        break;
      case ScorerKind::kMeanLogprob:
        scores[k] = scoring::mean_logprob(*candidates[k].candidate.token_logprobs);
        break;
      case ScorerKind::kAgreement:
        scores[k] = scoring::agreement_score(k, texts, predicate);
        break;
      case ScorerKind::kNone:
        break;
    }
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) candidates[k].score = scores[k];

  const std::span<const bool> mask(eligible.get(), candidates.size());
  return kind == ScorerKind::kUnigramNll ? scoring::argmin(scores, mask)
                                         : scoring::argmax(scores, mask);
}

SummaryTrace sample_and_select(std::string_view document_id, std::string_view article,
                               const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  return iterate_sentences(document_id, article, cfg, services, ScorerKind::kOverlap);
}

SummaryTrace selfcheck_select(std::string_view document_id, std::string_view article,
                              const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  require_pairs(cfg, "selfcheck_select");
  return iterate_sentences(document_id, article, cfg, services, ScorerKind::kUnigramNll);
}

SummaryTrace independent_select(std::string_view document_id, std::string_view article,
                                const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  auto responses = draw_responses(document_id, article, cfg, services, false);
  std::vector<std::vector<std::string>> split;
  for (const auto& r : responses) split.push_back(textproc::sentence_texts(r.candidate.text));

  SummaryTrace trace;
  trace.document_id = std::string(document_id);
  trace.method = cfg.method;
  trace.stop_reason = StopReason::kMaxSentences;
  const std::size_t needed = std::min<std::size_t>(2, responses.size());

  for (int position = 0; position < cfg.max_sentences; ++position) {
    const auto t = static_cast<std::size_t>(position);
    RoundTrace rt;
    rt.round_index = position;
    for (std::size_t k = 0; k < responses.size(); ++k) {
      if (split[k].size() <= t) continue;
      ScoredSample sample;
      sample.candidate.text = split[k][t];
      sample.candidate.tokens = textproc::word_tokens(sample.candidate.text);
      sample.candidate.ended = responses[k].candidate.ended && t + 1 == split[k].size();
      sample.filtered = sample.candidate.tokens.empty() ||
                        !passes_grammar(services.parser, sample.candidate.text);
      rt.candidates.push_back(std::move(sample));
    }
    if (rt.candidates.size() < needed || rt.candidates.empty()) {
      trace.stop_reason = StopReason::kSampleEnded;
      break;
    }
    rt.any_ended = std::any_of(rt.candidates.begin(), rt.candidates.end(),
                               [](const ScoredSample& s) { return s.candidate.ended; });
    rt.chosen = score_round(ScorerKind::kOverlap, rt.candidates);
    trace.rounds.push_back(rt);
    if (!rt.chosen) {
      trace.stop_reason = StopReason::kAbortedAllFiltered;
      break;
    }
    trace.sentences.push_back(rt.candidates[*rt.chosen].candidate.text);
  }
  return trace;
}

SummaryTrace rerank_responses(std::string_view document_id, std::string_view article,
                              const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  if (cfg.method != Method::kPcrr && cfg.method != Method::kScrr) {
    throw ConfigError("rerank_responses needs method pcrr or scrr");
  }
  require_pairs(cfg, to_string(cfg.method));
  const bool pcrr = cfg.method == Method::kPcrr;
  if (pcrr && !services.backend.supports_logprobs()) {
    throw ConfigError("pcrr needs a backend reporting token log-probabilities; " +
                      services.backend.name() + " does not");
  }
  auto candidates = draw_responses(document_id, article, cfg, services, pcrr);
  const auto chosen = score_round(scorer_for(cfg.method), candidates, cfg.selfcheck_aggregation,
                                  services.entailment);
  return single_round(document_id, cfg, std::move(candidates), chosen);
}

SummaryTrace baseline_decode(std::string_view document_id, std::string_view article,
                             const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  const auto* dist = dynamic_cast<const backend::DistributionBackend*>(&services.backend);
  const std::string prompt = build_prompt(cfg, article, {});
  const int cap = response_token_cap(cfg);

  CompletionResult result;
  try {
    switch (cfg.method) {
      case Method::kGreedy:
        if (dist) {
          result = backend::greedy_decode(*dist, prompt, cap);
        } else if (services.backend.supports_greedy()) {
          auto req = make_request(cfg, prompt, document_id, 0, 0, cap);
          req.temperature = 0.0;
          result = backend::complete(services.backend, req);
        } else {
          throw ConfigError("greedy decoding is not supported by " + services.backend.name());
        }
        break;
      case Method::kNucleus:
        result = backend::complete(services.backend,
                                   make_request(cfg, prompt, document_id, 0, 0, cap));
        break;
      case Method::kBeam:
        if (!dist) {
          throw ConfigError("beam search needs a distribution backend; " +
                            services.backend.name() + " only samples");
        }
        result = backend::beam_search(*dist, prompt, cfg.beams, cap);
        break;
      default:
        throw ConfigError("baseline_decode needs method greedy, nucleus or beam");
    }
  } catch (const PartialRunError&) {
    throw;
  } catch (const RunError& e) {
    SummaryTrace partial;
    partial.document_id = std::string(document_id);
    partial.method = cfg.method;
    throw PartialRunError(e.what(), partial);
  }
  result.token_logprobs.reset();
  std::vector<ScoredSample> candidates;
  candidates.push_back(to_candidate(std::move(result)));
  const auto chosen = score_round(ScorerKind::kNone, candidates);
  return single_round(document_id, cfg, std::move(candidates), chosen);
}

SummaryTrace decode(std::string_view document_id, std::string_view article,
                    const GenerationConfig& cfg, const DecodeServices& services) {
  cfg.validate();
  switch (cfg.method) {
    case Method::kSampleSelect:
      return sample_and_select(document_id, article, cfg, services);
    case Method::kIndependent:
      return independent_select(document_id, article, cfg, services);
    case Method::kSelfcheckSelect:
      return selfcheck_select(document_id, article, cfg, services);
    case Method::kPcrr:
    case Method::kScrr:
      return rerank_responses(document_id, article, cfg, services);
    case Method::kGreedy:
    case Method::kNucleus:
    case Method::kBeam:
      return baseline_decode(document_id, article, cfg, services);
  }
  throw ConfigError("unhandled method");
}

}  // namespace sampsel::decoder
