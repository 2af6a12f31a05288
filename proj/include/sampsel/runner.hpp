// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sampsel/decoder.hpp"

namespace sampsel::runner {

struct DatasetRecord {
  std::string id;
  std::string article;
  std::optional<std::string> reference;
};

/// One JSON object per line: {"id", "article", "reference"?}. Blank lines
/// are skipped. Throws UsageError on unreadable files, malformed lines,
/// empty articles or duplicate ids.
std::vector<DatasetRecord> load_dataset(const std::string& path);

enum class BackendKind { kRemote, kScripted, kSynthetic };

struct RunSettings {
  decoder::GenerationConfig generation;
  BackendKind backend = BackendKind::kRemote;
  std::string backend_url;
  std::string backend_script;
  bool backend_logprobs = true;
  bool backend_greedy = true;
  int retries = 2;
  int backoff_ms = 250;
  int timeout_ms = 60000;
  std::string parse_url;
  std::string entail_url;
  int workers = 1;
  double synthetic_fidelity = 0.6;
  int synthetic_decoys = 9;
  std::uint64_t synthetic_seed = 0;
};

/// Reads `key = value` settings from an optional config file, then applies
/// overrides (same keys) on top. Throws UsageError on unreadable files,
/// unknown keys or unparsable values.
RunSettings load_settings(const std::optional<std::string>& config_path,
                          const std::map<std::string, std::string>& overrides);

struct RunOptions {
  std::string dataset_path;
  std::optional<std::string> config_path;
  std::string output_path;
  /// Defaults to output_path + ".report.json".
  std::optional<std::string> report_path;
  std::map<std::string, std::string> overrides;
};

/// Decodes every record and writes one JSON line per document, then the
/// aggregate report. Returns 0 when every document succeeded and 2 when any
/// failed. Throws UsageError (exit status 1) before any generation for
/// unreadable inputs, duplicate ids and invalid configuration.
int run(const RunOptions& options, std::ostream& log);

/// Re-scores every persisted round and compares scores, filtered flags and
/// chosen indices bit for bit. Mismatches go to `out`. Returns 0 when none
/// are found and 2 otherwise; throws UsageError on malformed or empty files.
int replay(const std::string& trace_path, std::ostream& out);

}  // namespace sampsel::runner
