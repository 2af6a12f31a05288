// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sampsel::eval {

/// ROUGE-1 F1 over word tokens with clipped unigram counts, no stemming.
/// 0 when either side has no tokens or nothing matches.
double rouge1_f1(std::string_view candidate, std::string_view reference);

/// Number of word tokens.
int summary_length_tokens(std::string_view text);

struct EvalRecord {
  std::string document_id;
  std::optional<double> rouge1_f1;  // only when a reference exists
  int length_tokens = 0;
};

/// An evaluated document plus the run facts the report groups by.
struct ReportEntry {
  EvalRecord record;
  std::string method;
  std::string stop_reason;
};

struct Report {
  std::string method;
  int n_docs = 0;
  int n_with_reference = 0;
  std::optional<double> rouge1_f1_mean;
  double length_mean = 0.0;
  std::map<std::string, int> stop_reasons;
};

/// One report per method, ordered by method name. ROUGE means cover only
/// records with a reference. Throws UsageError on empty input.
std::vector<Report> aggregate_report(std::span<const ReportEntry> entries);

}  // namespace sampsel::eval
