// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// End-to-end commands: fetch -> classify -> explain -> aspects -> report.

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xabsa/timeutil.hpp"

namespace xabsa::pipeline {

struct RunConfig {
  // corpus
  std::string query_term = "chatgpt";
  std::string window_start = "2022-12-08";
  std::string window_end = "2023-07-24";
  std::size_t page_size = 100;
  double request_delay_seconds = 3.0;
  int max_retries = 3;
  std::string arxiv_base_url;            // empty: env override, then default
  std::filesystem::path corpus_file;     // prefetched corpus, replaces fetching

  // models
  std::string overall_model = "nlptown/bert-base-multilingual-uncased-sentiment";
  std::string overall_revision;
  std::string aspect_model = "yangheng/deberta-v3-base-absa-v1.1";
  std::string aspect_revision;
  std::string model_endpoint;            // empty: env override
  std::filesystem::path overall_lexicon;
  std::filesystem::path aspect_lexicon;

  // explanation
  std::string estimator = "hierarchical";  // exact | permutation | hierarchical
  std::size_t samples = 2000;
  std::size_t word_samples = 2000;
  std::optional<std::uint64_t> seed = 0;
  std::size_t exact_limit = 12;
  std::size_t hierarchy_k = 3;
  std::string target_label;                // empty: top label

  // aspects
  double tau_quantile = 0.75;
  std::size_t max_candidates = 10;
  std::vector<std::string> aspects;        // explicit terms skip extraction

  // run
  std::filesystem::path out_dir = "run";
  std::filesystem::path cache_dir;         // empty: in-memory cache only
  bool no_cache = false;
  std::size_t parallelism = 1;
};

/// Throws ConfigError on the first invalid setting.
void validate(const RunConfig& config);

DateWindow query_window(const RunConfig& config);

/// Settings that determine results (no output or cache locations).
nlohmann::json to_json(const RunConfig& config);

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitNetwork = 3,
  kExitModel = 4,
  kExitData = 5,
};

int exit_code_for(const std::exception& e);

/// Run-directory layout.
namespace files {
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kOverall = "overall.jsonl";
inline constexpr std::string_view kAttributions = "attributions";
inline constexpr std::string_view kHeatmaps = "heatmaps";
inline constexpr std::string_view kAspects = "aspects.jsonl";
inline constexpr std::string_view kReport = "report";
}  // namespace files

/// File-system safe form of an arXiv id ("hep-th/9901001" -> "hep-th_9901001").
std::string safe_id(std::string_view arxiv_id);

/// Each command returns the paths it wrote.
using Written = std::vector<std::filesystem::path>;

Written cmd_fetch(const RunConfig& config);
Written cmd_classify(const RunConfig& config);
/// All documents when doc_id is empty. Target defaults to each document's
/// top overall label.
Written cmd_explain(const RunConfig& config, const std::string& doc_id = {},
                    const std::string& target = {});
/// Aspect source precedence: `aspect` argument, then config.aspects, then
/// extraction from the document's attribution file.
Written cmd_aspects(const RunConfig& config, const std::string& doc_id = {},
                    const std::string& aspect = {});
Written cmd_report(const RunConfig& config);
Written cmd_run_all(const RunConfig& config);

/// Command-line entry point; returns the exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace xabsa::pipeline
