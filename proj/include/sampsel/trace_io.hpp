// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sampsel/decoder.hpp"
#include "sampsel/eval.hpp"

namespace sampsel::io {

using json = nlohmann::json;

/// Enough to recompute a round's scores offline.
struct ScorerSpec {
  decoder::ScorerKind kind = decoder::ScorerKind::kOverlap;
  scoring::Aggregation aggregation = scoring::Aggregation::kMean;
  std::string entailment = "exact_match";
};

/// One line of a run's output file. Successful documents carry summary,
/// stop_reason and eval; failed ones carry error and whatever rounds
/// completed before the failure.
struct OutputLine {
  std::string id;
  std::string method;
  ScorerSpec scorer;
  std::vector<decoder::RoundTrace> rounds;
  std::optional<std::string> summary;
  std::optional<decoder::StopReason> stop_reason;
  std::optional<eval::EvalRecord> eval;
  std::optional<std::string> error;
};

json to_json(const ScoredSample& sample);
json to_json(const decoder::RoundTrace& round);
json to_json(const eval::EvalRecord& record);
json to_json(const eval::Report& report);
json to_json(const OutputLine& line);

/// Inverse of to_json(OutputLine). Throws UsageError on schema violations.
OutputLine output_line_from_json(const json& doc);

decoder::RoundTrace round_from_json(const json& doc);

}  // namespace sampsel::io
