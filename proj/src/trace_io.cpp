// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/trace_io.hpp"

#include "sampsel/errors.hpp"

namespace sampsel::io {
namespace {

std::string_view to_string(scoring::Aggregation aggregation) {
  return aggregation == scoring::Aggregation::kMax ? "max" : "mean";
}

scoring::Aggregation aggregation_from_string(const std::string& name) {
  if (name == "mean") return scoring::Aggregation::kMean;
  if (name == "max") return scoring::Aggregation::kMax;
  throw UsageError("unknown aggregation \"" + name + "\"");
}

ScoredSample sample_from_json(const json& doc) {
  ScoredSample s;
  s.candidate.text = doc.at("text").get<std::string>();
  s.candidate.tokens = doc.at("tokens").get<TokenList>();
  s.candidate.ended = doc.at("ended").get<bool>();
  if (doc.contains("token_logprobs")) {
    s.candidate.token_logprobs = doc["token_logprobs"].get<std::vector<double>>();
  }
  s.score = doc.at("score").get<double>();
  s.filtered = doc.at("filtered").get<bool>();
  return s;
}

}  // namespace

json to_json(const ScoredSample& sample) {
  json doc{{"text", sample.candidate.text},
           {"tokens", sample.candidate.tokens},
           {"ended", sample.candidate.ended},
           {"score", sample.score},
           {"filtered", sample.filtered}};
  if (sample.candidate.token_logprobs) doc["token_logprobs"] = *sample.candidate.token_logprobs;
  return doc;
}

json to_json(const decoder::RoundTrace& round) {
  json candidates = json::array();
  for (const auto& c : round.candidates) candidates.push_back(to_json(c));
  return {{"round_index", round.round_index},
          {"candidates", std::move(candidates)},
          {"chosen", round.chosen ? json(*round.chosen) : json(nullptr)},
          {"any_ended", round.any_ended}};
}

json to_json(const eval::EvalRecord& record) {
  json doc{{"document_id", record.document_id}, {"length_tokens", record.length_tokens}};
  if (record.rouge1_f1) doc["rouge1_f1"] = *record.rouge1_f1;
  return doc;
}

json to_json(const eval::Report& report) {
  json doc{{"method", report.method},
           {"n_docs", report.n_docs},
           {"n_with_reference", report.n_with_reference},
           {"length_mean", report.length_mean},
           {"stop_reasons", report.stop_reasons}};
  if (report.rouge1_f1_mean) doc["rouge1_f1_mean"] = *report.rouge1_f1_mean;
  return doc;
}

json to_json(const OutputLine& line) {
  json rounds = json::array();
  for (const auto& r : line.rounds) rounds.push_back(to_json(r));
  json doc{{"id", line.id},
           {"method", line.method},
           {"scorer",
            {{"kind", decoder::to_string(line.scorer.kind)},
             {"aggregation", to_string(line.scorer.aggregation)},
             {"entailment", line.scorer.entailment}}},
           {"rounds", std::move(rounds)}};
  if (line.summary) doc["summary"] = *line.summary;
  if (line.stop_reason) doc["stop_reason"] = decoder::to_string(*line.stop_reason);
  if (line.eval) doc["eval"] = to_json(*line.eval);
  if (line.error) doc["error"] = *line.error;
  return doc;
}

decoder::RoundTrace round_from_json(const json& doc) {
  try {
    decoder::RoundTrace round;
    round.round_index = doc.at("round_index").get<int>();
    for (const auto& c : doc.at("candidates")) round.candidates.push_back(sample_from_json(c));
    if (!doc.at("chosen").is_null()) round.chosen = doc["chosen"].get<std::size_t>();
    round.any_ended = doc.at("any_ended").get<bool>();
    return round;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed round trace: ") + e.what());
  }
}

OutputLine output_line_from_json(const json& doc) {
  try {
    OutputLine line;
    line.id = doc.at("id").get<std::string>();
    line.method = doc.at("method").get<std::string>();
    const auto& scorer = doc.at("scorer");
    line.scorer.kind = decoder::scorer_kind_from_string(scorer.at("kind").get<std::string>());
    line.scorer.aggregation = aggregation_from_string(scorer.at("aggregation").get<std::string>());
    line.scorer.entailment = scorer.at("entailment").get<std::string>();
    for (const auto& r : doc.at("rounds")) line.rounds.push_back(round_from_json(r));
    if (doc.contains("summary")) line.summary = doc["summary"].get<std::string>();
    if (doc.contains("stop_reason")) {
      line.stop_reason = decoder::stop_reason_from_string(doc["stop_reason"].get<std::string>());
    }
    if (doc.contains("eval")) {
      const auto& e = doc["eval"];
      eval::EvalRecord record;
      record.document_id = e.at("document_id").get<std::string>();
      record.length_tokens = e.at("length_tokens").get<int>();
      if (e.contains("rouge1_f1")) record.rouge1_f1 = e["rouge1_f1"].get<double>();
      line.eval = record;
    }
    if (doc.contains("error")) line.error = doc["error"].get<std::string>();
    if (!line.error && (!line.summary || !line.stop_reason || !line.eval)) {
      throw UsageError("output line for \"" + line.id + "\" has neither a result nor an error");
    }
    return line;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed output line: ") + e.what());
  }
}

}  // namespace sampsel::io
