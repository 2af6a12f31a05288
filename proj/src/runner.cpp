// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sampsel/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "sampsel/errors.hpp"
#include "sampsel/eval.hpp"
#include "sampsel/remote_backend.hpp"
#include "sampsel/synthetic.hpp"
#include "sampsel/textproc.hpp"
#include "sampsel/trace_io.hpp"

namespace sampsel::runner {
namespace {

using json = nlohmann::json;

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + std::string(what) + " " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw UsageError("invalid value \"" + value + "\" for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("invalid boolean \"" + value + "\" for " + key);
}

void apply_setting(RunSettings& s, const std::string& key, const std::string& value) {
  auto& g = s.generation;
  try {
    if (key == "method") {
      g.method = decoder::method_from_string(value);
    } else if (key == "n") {
      g.n = parse_number<int>(key, value);
    } else if (key == "top_p") {
      g.top_p = parse_number<double>(key, value);
    } else if (key == "temperature") {
      g.temperature = parse_number<double>(key, value);
    } else if (key == "seed") {
      g.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "max_sentence_tokens") {
      g.max_sentence_tokens = parse_number<int>(key, value);
    } else if (key == "max_sentences") {
      g.max_sentences = parse_number<int>(key, value);
    } else if (key == "prompt_template_file") {
      g.prompt_template = read_file(value, "prompt template");
    } else if (key == "beams") {
      g.beams = parse_number<int>(key, value);
    } else if (key == "sample_workers") {
      g.sample_workers = parse_number<int>(key, value);
    } else if (key == "selfcheck_aggregation") {
      if (value == "mean") {
        g.selfcheck_aggregation = scoring::Aggregation::kMean;
      } else if (value == "max") {
        g.selfcheck_aggregation = scoring::Aggregation::kMax;
      } else {
        throw UsageError("selfcheck_aggregation must be mean or max");
      }
    } else if (key == "backend") {
      if (value == "remote") {
        s.backend = BackendKind::kRemote;
      } else if (value == "scripted") {
        s.backend = BackendKind::kScripted;
      } else if (value == "synthetic") {
        s.backend = BackendKind::kSynthetic;
      } else {
        throw UsageError("backend must be remote, scripted or synthetic");
      }
    } else if (key == "backend_url") {
      s.backend_url = value;
    } else if (key == "backend_script") {
      s.backend_script = value;
    } else if (key == "backend_logprobs") {
      s.backend_logprobs = parse_bool(key, value);
    } else if (key == "backend_greedy") {
      s.backend_greedy = parse_bool(key, value);
    } else if (key == "retries") {
      s.retries = parse_number<int>(key, value);
    } else if (key == "backoff_ms") {
      s.backoff_ms = parse_number<int>(key, value);
    } else if (key == "timeout_ms") {
      s.timeout_ms = parse_number<int>(key, value);
    } else if (key == "parse_url") {
      s.parse_url = value;
    } else if (key == "entail_url") {
      s.entail_url = value;
    } else if (key == "workers") {
      s.workers = parse_number<int>(key, value);
    } else if (key == "synthetic_fidelity") {
      s.synthetic_fidelity = parse_number<double>(key, value);
    } else if (key == "synthetic_decoys") {
      s.synthetic_decoys = parse_number<int>(key, value);
    } else if (key == "synthetic_seed") {
      s.synthetic_seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw UsageError("unknown setting \"" + key + "\"");
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Backend shared by all documents; synthetic runs build one per document.
std::shared_ptr<backend::SamplingBackend> shared_backend(const RunSettings& s) {
  switch (s.backend) {
    case BackendKind::kRemote: {
      if (s.backend_url.empty()) throw UsageError("remote backend needs --backend-url");
      backend::RemoteBackendOptions options;
      options.base_url = s.backend_url;
      options.timeout = std::chrono::milliseconds(s.timeout_ms);
      options.retry.max_retries = s.retries;
      options.retry.initial_backoff = std::chrono::milliseconds(s.backoff_ms);
      options.supports_logprobs = s.backend_logprobs;
      options.supports_greedy = s.backend_greedy;
      if (const char* key = std::getenv("SAMPSEL_API_KEY")) options.api_key = key;
      return std::make_shared<backend::RemoteBackend>(std::move(options));
    }
    case BackendKind::kScripted:
      if (s.backend_script.empty()) throw UsageError("scripted backend needs backend_script");
      return backend::ScriptedBackend::from_json_file(s.backend_script);
    case BackendKind::kSynthetic:
      return nullptr;
  }
  return nullptr;
}

void check_capabilities(const RunSettings& s, const backend::SamplingBackend* shared) {
  using decoder::Method;
  const Method m = s.generation.method;
  if ((m == Method::kSelfcheckSelect || m == Method::kPcrr || m == Method::kScrr) &&
      s.generation.n < 2) {
    throw UsageError(std::string(decoder::to_string(m)) + " needs n >= 2");
  }
  if (!shared) return;  // synthetic backends expose full distributions
  const bool distribution = dynamic_cast<const backend::DistributionBackend*>(shared) != nullptr;
  if (m == Method::kPcrr && !shared->supports_logprobs()) {
    throw UsageError("pcrr needs token log-probabilities, which " + shared->name() + " does not report");
  }
  if (m == Method::kBeam && !distribution) {
    throw UsageError("beam search needs a distribution backend; " + shared->name() + " only samples");
  }
  if (m == Method::kGreedy && !distribution && !shared->supports_greedy()) {
    throw UsageError("greedy decoding is not supported by " + shared->name());
  }
}

io::ScorerSpec scorer_spec(const RunSettings& s, const scoring::EntailmentPredicate& entailment) {
  io::ScorerSpec spec;
  spec.kind = decoder::scorer_for(s.generation.method);
  spec.aggregation = s.generation.selfcheck_aggregation;
  spec.entailment = entailment.name();
  return spec;
}

std::unique_ptr<scoring::EntailmentPredicate> predicate_named(const std::string& name) {
  if (name == "exact_match") return std::make_unique<scoring::ExactMatchPredicate>();
  if (name.rfind("http:", 0) == 0) {
    return std::make_unique<scoring::HttpEntailmentPredicate>(name.substr(5));
  }
  throw UsageError("cannot rebuild entailment predicate \"" + name + "\"");
}

bool same_candidates(const ScoredSample& a, const ScoredSample& b) {
  return a.score == b.score && a.filtered == b.filtered;
}

std::string format_score(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read dataset " + path);
  std::vector<DatasetRecord> records;
  std::set<std::string> seen;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    DatasetRecord record;
    try {
      const json doc = json::parse(text);
      record.id = doc.at("id").get<std::string>();
      record.article = doc.at("article").get<std::string>();
      if (doc.contains("reference") && !doc["reference"].is_null()) {
        record.reference = doc["reference"].get<std::string>();
      }
    } catch (const json::exception& e) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (record.article.empty()) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": empty article for \"" + record.id + "\"");
    }
    if (!seen.insert(record.id).second) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": duplicate id \"" + record.id + "\"");
    }
    records.push_back(std::move(record));
  }
  return records;
}

RunSettings load_settings(const std::optional<std::string>& config_path,
                          const std::map<std::string, std::string>& overrides) {
  RunSettings settings;
  if (config_path) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(*config_path, tree);
    } catch (const boost::property_tree::ptree_error& e) {
      throw UsageError(std::string("cannot read config: ") + e.what());
    }
    for (const auto& [key, node] : tree) {
      if (!node.empty()) throw UsageError("config sections are not supported (\"" + key + "\")");
      apply_setting(settings, key, node.data());
    }
  }
  for (const auto& [key, value] : overrides) apply_setting(settings, key, value);
  try {
    settings.generation.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (settings.workers < 1) throw UsageError("workers must be >= 1");
  return settings;
}

int run(const RunOptions& options, std::ostream& log) {
  const RunSettings settings = load_settings(options.config_path, options.overrides);
  const auto records = load_dataset(options.dataset_path);
  const auto shared = shared_backend(settings);
  check_capabilities(settings, shared.get());

  std::unique_ptr<grammar::ParseProvider> parser;
  if (settings.parse_url.empty()) {
    parser = std::make_unique<grammar::HeuristicParseProvider>();
  } else {
    parser = std::make_unique<grammar::RemoteParseProvider>(settings.parse_url);
  }
  std::unique_ptr<scoring::EntailmentPredicate> entailment;
  if (settings.entail_url.empty()) {
    entailment = std::make_unique<scoring::ExactMatchPredicate>();
  } else {
    entailment = std::make_unique<scoring::HttpEntailmentPredicate>(settings.entail_url);
  }
  const io::ScorerSpec spec = scorer_spec(settings, *entailment);
  const std::string method(decoder::to_string(settings.generation.method));

  std::ofstream out(options.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + options.output_path);

  std::mutex mutex;
  std::vector<eval::ReportEntry> entries;
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};

  auto process = [&](const DatasetRecord& record) {
    io::OutputLine line;
    line.id = record.id;
    line.method = method;
    line.scorer = spec;
    std::optional<eval::ReportEntry> entry;
    try {
      const std::string article = textproc::clean_article(record.article);
      std::shared_ptr<backend::SamplingBackend> local = shared;
      if (!local) {
        local = std::make_shared<backend::SyntheticHallucinationBackend>(
            backend::SyntheticHallucinationBackend::facts_from_article(article),
            settings.synthetic_fidelity, settings.synthetic_decoys,
            backend::derive_seed(settings.synthetic_seed, record.id, 0, 0));
      }
      const decoder::DecodeServices services{*local, *parser, entailment.get()};
      const auto trace = decoder::decode(record.id, article, settings.generation, services);
      line.rounds = trace.rounds;
      line.summary = trace.summary();
      line.stop_reason = trace.stop_reason;
      eval::EvalRecord ev;
      ev.document_id = record.id;
      ev.length_tokens = eval::summary_length_tokens(*line.summary);
      // Metrics use the raw reference; cleanup applies to prompts only.
      if (record.reference) ev.rouge1_f1 = eval::rouge1_f1(*line.summary, *record.reference);
      line.eval = ev;
      entry = eval::ReportEntry{ev, method, std::string(decoder::to_string(trace.stop_reason))};
    } catch (const decoder::PartialRunError& e) {
      line.rounds = e.partial().rounds;
      line.error = e.what();
    } catch (const Error& e) {
      line.error = e.what();
    }

    const std::lock_guard lock(mutex);
    out << io::to_json(line).dump() << '\n';
    out.flush();
    if (entry) {
      entries.push_back(std::move(*entry));
      log << record.id << ": " << entries.back().stop_reason << '\n';
    } else {
      ++failures;
      log << record.id << ": failed: " << *line.error << '\n';
    }
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) process(records[i]);
  };
  if (settings.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < settings.workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  json report;
  if (!entries.empty()) {
    report = io::to_json(eval::aggregate_report(entries).front());
  } else {
    report = io::to_json(eval::Report{method, 0, 0, std::nullopt, 0.0, {}});
  }
  report["n_failed"] = failures.load();
  report["generated_at"] = utc_timestamp();
  const std::string report_path = options.report_path.value_or(options.output_path + ".report.json");
  std::ofstream report_out(report_path, std::ios::trunc);
  if (!report_out) throw UsageError("cannot write " + report_path);
  report_out << report.dump(2) << '\n';

  return failures.load() > 0 ? 2 : 0;
}

int replay(const std::string& trace_path, std::ostream& out) {
  std::ifstream in(trace_path);
  if (!in) throw UsageError("cannot read trace " + trace_path);
  std::string text;
  int line_no = 0;
  int lines = 0;
  int mismatches = 0;
  int rounds_checked = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++lines;
    io::OutputLine line;
    try {
      line = io::output_line_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw UsageError(trace_path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::unique_ptr<scoring::EntailmentPredicate> predicate;
    if (line.scorer.kind == decoder::ScorerKind::kAgreement) {
      predicate = predicate_named(line.scorer.entailment);
    }

    auto report = [&](const decoder::RoundTrace& round, const std::string& what) {
      ++mismatches;
      out << line.id << " round " << round.round_index << ": " << what << '\n';
    };

    for (const auto& round : line.rounds) {
      ++rounds_checked;
      std::vector<ScoredSample> rescored = round.candidates;
      for (std::size_t k = 0; k < rescored.size(); ++k) {
        auto& c = rescored[k];
        const auto tokens = textproc::word_tokens(c.candidate.text);
        if (tokens != c.candidate.tokens) {
          report(round, "candidate " + std::to_string(k) + " tokens differ from its text");
        }
        c.candidate.tokens = tokens;
        c.score = 0.0;
      }
      const auto chosen = decoder::score_round(line.scorer.kind, rescored, line.scorer.aggregation,
                                               predicate.get());
      for (std::size_t k = 0; k < rescored.size(); ++k) {
        if (!same_candidates(rescored[k], round.candidates[k])) {
          report(round, "candidate " + std::to_string(k) + " recorded score " +
                            format_score(round.candidates[k].score) +
                            (round.candidates[k].filtered ? " (filtered)" : "") + ", recomputed " +
                            format_score(rescored[k].score) +
                            (rescored[k].filtered ? " (filtered)" : ""));
        }
      }
      if (chosen != round.chosen) {
        auto show = [](const std::optional<std::size_t>& c) {
          return c ? std::to_string(*c) : std::string("none");
        };
        report(round, "recorded choice " + show(round.chosen) + ", recomputed " + show(chosen));
      }
    }
  }
  if (lines == 0) throw UsageError("trace " + trace_path + " is empty");
  out << "replayed " << rounds_checked << " rounds from " << lines << " documents, " << mismatches
      << " mismatches\n";
  return mismatches == 0 ? 0 : 2;
}

}  // namespace sampsel::runner
