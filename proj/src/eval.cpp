// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "sampsel/errors.hpp"
#include "sampsel/textproc.hpp"

namespace sampsel::eval {

double rouge1_f1(std::string_view candidate, std::string_view reference) {
  const auto cand = textproc::word_tokens(candidate);
  const auto ref = textproc::word_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;

  std::unordered_map<std::string, long long> ref_counts;
  for (const auto& w : ref) ++ref_counts[w];
  long long match = 0;
  for (const auto& w : cand) {
    auto it = ref_counts.find(w);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++match;
    }
  }
  if (match == 0) return 0.0;
  // 2PR / (P + R) with P = match/|cand| and R = match/|ref|, in one division.
  return 2.0 * static_cast<double>(match) / static_cast<double>(cand.size() + ref.size());
}

int summary_length_tokens(std::string_view text) {
  return static_cast<int>(textproc::word_tokens(text).size());
}

std::vector<Report> aggregate_report(std::span<const ReportEntry> entries) {
  if (entries.empty()) throw UsageError("cannot aggregate an empty set of evaluation records");

  struct Sums {
    Report report;
    double rouge_sum = 0.0;
    long long length_sum = 0;
  };
  std::map<std::string, Sums> by_method;
  for (const auto& entry : entries) {
    auto& sums = by_method[entry.method];
    sums.report.method = entry.method;
    ++sums.report.n_docs;
    sums.length_sum += entry.record.length_tokens;
    if (entry.record.rouge1_f1) {
      ++sums.report.n_with_reference;
      sums.rouge_sum += *entry.record.rouge1_f1;
    }
    ++sums.report.stop_reasons[entry.stop_reason];
  }

  std::vector<Report> reports;
  for (auto& [method, sums] : by_method) {
    Report r = std::move(sums.report);
    r.length_mean = static_cast<double>(sums.length_sum) / r.n_docs;
    if (r.n_with_reference > 0) r.rouge1_f1_mean = sums.rouge_sum / r.n_with_reference;
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace sampsel::eval
