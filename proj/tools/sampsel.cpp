// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "sampsel/errors.hpp"
#include "sampsel/runner.hpp"

namespace {

// Flag name -> settings key. Flags win over config-file values.
const std::map<std::string, std::string> kOverrideFlags = {
    {"--method", "method"},
    {"--n", "n"},
    {"--top-p", "top_p"},
    {"--temperature", "temperature"},
    {"--seed", "seed"},
    {"--backend", "backend"},
    {"--backend-url", "backend_url"},
    {"--backend-script", "backend_script"},
    {"--parse-url", "parse_url"},
    {"--entail-url", "entail_url"},
    {"--max-sentence-tokens", "max_sentence_tokens"},
    {"--max-sentences", "max_sentences"},
    {"--prompt-template-file", "prompt_template_file"},
    {"--workers", "workers"},
    {"--retries", "retries"},
    {"--timeout-ms", "timeout_ms"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence-level self-consistency decoding and evaluation"};
  app.require_subcommand(1);

  sampsel::runner::RunOptions run_options;
  std::string config_path;
  std::string report_path;
  std::map<std::string, std::string> flag_values;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "Decode a dataset and write traces plus a report");
  run->add_option("--dataset", run_options.dataset_path, "JSON-lines dataset")->required();
  run->add_option("--output", run_options.output_path, "JSON-lines output")->required();
  run->add_option("--config", config_path, "key = value settings file");
  run->add_option("--report", report_path, "report path (default: <output>.report.json)");
  for (const auto& [flag, key] : kOverrideFlags) {
    run->add_option(flag, flag_values[key], "overrides config key " + key);
  }
  run->add_flag("-v,--verbose", verbose, "debug logging");

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "Re-score a run's traces and verify them");
  replay->add_option("trace", trace_path, "output file written by run")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*run) {
      if (!config_path.empty()) run_options.config_path = config_path;
      if (!report_path.empty()) run_options.report_path = report_path;
      for (const auto& [flag, key] : kOverrideFlags) {
        if (run->count(flag) > 0) run_options.overrides[key] = flag_values[key];
      }
      return sampsel::runner::run(run_options, std::cerr);
    }
    return sampsel::runner::replay(trace_path, std::cout);
  } catch (const sampsel::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sampsel::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  }
}
