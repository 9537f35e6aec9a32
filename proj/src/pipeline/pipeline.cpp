// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "xabsa/arxiv.hpp"
#include "xabsa/aspects.hpp"
#include "xabsa/error.hpp"
#include "xabsa/explain.hpp"
#include "xabsa/fileio.hpp"
#include "xabsa/heatmap.hpp"
#include "xabsa/models.hpp"
#include "xabsa/report.hpp"
#include "xabsa/session.hpp"

namespace xabsa::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using inference::ClassifierSession;
using inference::LabelDistribution;

std::string env_or(std::string_view name, const std::string& fallback) {
  const char* v = std::getenv(std::string(name).c_str());
  return v && *v ? std::string(v) : fallback;
}

fs::path require(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw DataError("missing upstream artifact " + path.string() + " (run `xabsa " +
                    std::string(producer) + "` first)");
  }
  return path;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::shared_ptr<inference::ScoreCache> make_cache(const RunConfig& config) {
  if (config.no_cache) return nullptr;
  if (config.cache_dir.empty()) return std::make_shared<inference::ScoreCache>();
  return std::make_shared<inference::ScoreCache>(config.cache_dir);
}

std::unique_ptr<ClassifierSession> make_session(
    const RunConfig& config, inference::Task task,
    std::shared_ptr<inference::ScoreCache> cache) {
  const bool overall = task == inference::Task::kOverallSentiment;
  inference::ModelConfig mc;
  mc.model_id = overall ? config.overall_model : config.aspect_model;
  mc.revision_pin = overall ? config.overall_revision : config.aspect_revision;
  mc.endpoint = env_or(inference::kModelEndpointEnv, config.model_endpoint);
  if (!config.model_endpoint.empty()) mc.endpoint = config.model_endpoint;
  mc.lexicon_file = overall ? config.overall_lexicon : config.aspect_lexicon;
  return std::make_unique<ClassifierSession>(inference::resolve_model(mc, task),
                                             std::move(cache));
}

std::vector<corpus::PaperRecord> load_run_corpus(const RunConfig& config) {
  return corpus::load_corpus(require(config.out_dir / files::kCorpus, "fetch"));
}

std::vector<corpus::AbstractDocument> select_documents(
    const std::vector<corpus::PaperRecord>& records, const std::string& doc_id) {
  std::vector<corpus::AbstractDocument> docs;
  for (const auto& r : records) {
    if (doc_id.empty() || r.arxiv_id == doc_id) docs.push_back(corpus::build_document(r));
  }
  if (!doc_id.empty() && docs.empty()) {
    throw DataError("document '" + doc_id + "' is not in the corpus");
  }
  return docs;
}

std::string overall_to_json(const std::string& doc_id, const LabelDistribution& d,
                            const inference::ModelSpec& spec) {
  json entries = json::array();
  for (const auto& e : d.entries) entries.push_back({{"label", e.label}, {"score", e.score}});
  json j = {{"doc_id", doc_id},
            {"model_id", d.model_id},
            {"revision", spec.revision_pin},
            {"truncated", d.truncated},
            {"text_digest", d.target_text_hash},
            {"top_label", inference::top_label(d)},
            {"entries", entries}};
  return j.dump();
}

template <typename Fn>
void for_each_json_line(const fs::path& path, Fn fn) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw DataError(path.string() + ": not a JSON object", line_number);
    }
    try {
      fn(j);
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": " + e.what(), line_number);
    }
  }
}

std::vector<report::OverallResult> load_overall(const fs::path& path) {
  std::vector<report::OverallResult> out;
  for_each_json_line(path, [&](const json& j) {
    report::OverallResult r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.distribution.model_id = j.at("model_id").get<std::string>();
    r.distribution.label_set = inference::star_labels();
    r.distribution.truncated = j.at("truncated").get<bool>();
    r.distribution.target_text_hash = j.at("text_digest").get<std::string>();
    for (const auto& e : j.at("entries")) {
      r.distribution.entries.push_back({e.at("label").get<std::string>(),
                                        e.at("score").get<double>()});
    }
    if (auto problem = inference::check_distribution(r.distribution)) {
      throw DataError(path.string() + ": " + *problem);
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<aspects::AspectSentiment> load_aspects(const fs::path& path) {
  std::vector<aspects::AspectSentiment> out;
  for_each_json_line(path, [&](const json& j) {
    aspects::AspectSentiment a;
    a.doc_id = j.at("doc_id").get<std::string>();
    a.term = j.at("term").get<std::string>();
    a.salience = j.at("salience").get<double>();
    a.polarity = inference::parse_polarity(j.at("polarity").get<std::string>());
    const auto spec = inference::make_spec(j.at("model_id").get<std::string>(),
                                           inference::Task::kAspectSentiment, "");
    std::vector<double> probs;
    for (const auto& label : spec.label_set) probs.push_back(j.at("scores").at(label).get<double>());
    a.distribution = inference::make_distribution(spec, probs, "");
    out.push_back(std::move(a));
  });
  return out;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::string body;
  for (const auto& l : lines) {
    body += l;
    body += '\n';
  }
  write_file_atomic(path, body);
}

}  // namespace

void validate(const RunConfig& config) {
  if (trim(config.query_term).empty()) throw ConfigError("query_term is empty");
  query_window(config);
  if (config.page_size < 1 || config.page_size > 2000) {
    throw ConfigError("page_size must be in [1, 2000]");
  }
  if (config.request_delay_seconds < 0) throw ConfigError("request_delay is negative");
  if (config.max_retries < 0) throw ConfigError("max_retries is negative");
  if (config.estimator != "exact" && config.estimator != "permutation" &&
      config.estimator != "hierarchical") {
    throw ConfigError("estimator must be exact, permutation or hierarchical");
  }
  if (config.estimator != "exact" && !config.seed) {
    throw ConfigError("a seed is required for the " + config.estimator + " estimator");
  }
  if (config.samples < 1 || config.word_samples < 1) {
    throw ConfigError("sample counts must be at least 1");
  }
  if (config.exact_limit < 1 || config.exact_limit > 24) {
    throw ConfigError("exact_limit must be in [1, 24]");
  }
  if (!(config.tau_quantile >= 0.0 && config.tau_quantile <= 1.0)) {
    throw ConfigError("tau_quantile must be in [0, 1]");
  }
  if (config.max_candidates < 1) throw ConfigError("max_candidates must be at least 1");
  if (config.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (config.out_dir.empty()) throw ConfigError("output directory is empty");
  if (!config.corpus_file.empty() && !fs::exists(config.corpus_file)) {
    throw ConfigError("corpus file not found: " + config.corpus_file.string());
  }
  for (const auto& a : config.aspects) {
    if (trim(a).empty()) throw ConfigError("empty aspect term in aspect list");
  }
}

DateWindow query_window(const RunConfig& config) {
  const auto first = parse_date(config.window_start);
  const auto last = parse_date(config.window_end);
  if (!first || !last) throw ConfigError("window dates must be YYYY-MM-DD");
  if (*last < *first) throw ConfigError("window start is after window end");
  return {*first, *last};
}

json to_json(const RunConfig& c) {
  return {{"query_term", c.query_term},
          {"window", {c.window_start, c.window_end}},
          {"corpus_file", c.corpus_file.empty() ? "" : c.corpus_file.filename().string()},
          {"overall_model", {{"id", c.overall_model}, {"revision", c.overall_revision}}},
          {"aspect_model", {{"id", c.aspect_model}, {"revision", c.aspect_revision}}},
          {"estimator",
           {{"name", c.estimator},
            {"samples", c.samples},
            {"word_samples", c.word_samples},
            {"seed", c.seed ? json(*c.seed) : json(nullptr)},
            {"exact_limit", c.exact_limit},
            {"hierarchy_k", c.hierarchy_k},
            {"target_label", c.target_label}}},
          {"aspects",
           {{"tau_quantile", c.tau_quantile},
            {"max_candidates", c.max_candidates},
            {"terms", c.aspects}}}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const TransportError*>(&e)) return kExitNetwork;
  if (dynamic_cast<const ModelError*>(&e)) return kExitModel;
  if (dynamic_cast<const BatchItemError*>(&e)) return kExitModel;
  if (dynamic_cast<const DataError*>(&e)) return kExitData;
  return kExitInternal;
}

std::string safe_id(std::string_view arxiv_id) {
  std::string out(arxiv_id);
  for (char& c : out) {
    if (!is_ascii_alnum(c) && c != '.' && c != '-') c = '_';
  }
  return out;
}

Written cmd_fetch(const RunConfig& config) {
  validate(config);
  const fs::path target = config.out_dir / files::kCorpus;
  std::vector<corpus::PaperRecord> records;
  if (!config.corpus_file.empty()) {
    records = corpus::load_corpus(config.corpus_file);
  } else {
    const std::string base = config.arxiv_base_url.empty()
                                 ? env_or(arxiv::kBaseUrlEnv, std::string(arxiv::kDefaultBaseUrl))
                                 : config.arxiv_base_url;
    arxiv::HttpFeedTransport transport(base);
    arxiv::FetchOptions options;
    options.page_size = config.page_size;
    options.max_retries = config.max_retries;
    options.request_delay = std::chrono::milliseconds(
        static_cast<long long>(config.request_delay_seconds * 1000.0));
    auto result = arxiv::fetch_papers(transport, config.query_term,
                                      query_window(config), options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    records = std::move(result.records);
  }
  corpus::save_corpus(records, target);
  return {target};
}

Written cmd_classify(const RunConfig& config) {
  validate(config);
  auto session = make_session(config, inference::Task::kOverallSentiment, make_cache(config));
  const auto records = load_run_corpus(config);
  const auto docs = select_documents(records, {});
  std::vector<std::string> texts;
  for (const auto& d : docs) texts.push_back(d.text);
  const auto dists = texts.empty() ? std::vector<LabelDistribution>{}
                                   : session->classify_batch(texts);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    lines.push_back(overall_to_json(docs[i].source_id, dists[i], session->spec()));
  }
  const fs::path target = config.out_dir / files::kOverall;
  write_lines(target, lines);
  return {target};
}

Written cmd_explain(const RunConfig& config, const std::string& doc_id,
                    const std::string& target) {
  validate(config);
  auto session = make_session(config, inference::Task::kOverallSentiment, make_cache(config));
  const auto records = load_run_corpus(config);
  const auto docs = select_documents(records, doc_id);
  const std::string placeholder = explain::default_placeholder(*session);

  std::vector<Written> per_doc(docs.size());
  parallel_for(docs.size(), config.parallelism, [&](std::size_t i) {
    const auto& doc = docs[i];
    std::string label = !target.empty() ? target : config.target_label;
    if (label.empty()) label = inference::top_label(session->classify_overall(doc.text));

    explain::ValueBuilder build = [&](const explain::FeatureSegmentation& seg) {
      return std::make_unique<explain::ClassifierValueFunction>(*session, doc.text, seg,
                                                                label, placeholder);
    };
    explain::Attribution attribution;
    if (config.estimator == "hierarchical") {
      explain::HierarchicalParams params;
      params.top_k = config.hierarchy_k;
      params.exact_limit = config.exact_limit;
      params.sentence_samples = config.samples;
      params.word_samples = config.word_samples;
      params.seed = config.seed.value_or(0);
      attribution = explain::shapley_hierarchical(build, doc, label, params);
    } else {
      const auto words = explain::word_segmentation(doc.text);
      const auto v = build(words);
      const auto values = config.estimator == "exact"
                              ? explain::shapley_exact(*v, config.exact_limit)
                              : explain::shapley_permutation(*v, config.samples,
                                                             config.seed.value_or(0));
      attribution = explain::make_attribution(words, values);
    }
    attribution.doc_id = doc.source_id;
    attribution.target_label = label;
    attribution.model_id = session->spec().model_id;

    const std::string stem = safe_id(doc.source_id);
    const fs::path json_path = config.out_dir / files::kAttributions / (stem + ".json");
    const fs::path html_path = config.out_dir / files::kHeatmaps / (stem + ".html");
    const fs::path ansi_path = config.out_dir / files::kHeatmaps / (stem + ".ansi");
    write_file_atomic(json_path, explain::attribution_to_json(attribution) + "\n");
    write_file_atomic(html_path, explain::render_heatmap(attribution, doc.text,
                                                         explain::HeatmapFormat::kHtml));
    write_file_atomic(ansi_path, explain::render_heatmap(attribution, doc.text,
                                                         explain::HeatmapFormat::kAnsi) +
                                     "\n");
    per_doc[i] = {json_path, html_path, ansi_path};
  });
  Written written;
  for (auto& w : per_doc) written.insert(written.end(), w.begin(), w.end());
  return written;
}

Written cmd_aspects(const RunConfig& config, const std::string& doc_id,
                    const std::string& aspect) {
  validate(config);
  auto session = make_session(config, inference::Task::kAspectSentiment, make_cache(config));
  const auto records = load_run_corpus(config);
  const auto docs = select_documents(records, doc_id);

  aspects::ExtractParams params;
  params.tau_quantile = config.tau_quantile;
  params.max_candidates = config.max_candidates;
  params.extra_stopwords = {config.query_term};

  std::vector<std::vector<std::string>> per_doc(docs.size());
  parallel_for(docs.size(), config.parallelism, [&](std::size_t i) {
    const auto& doc = docs[i];
    std::vector<aspects::AspectSentiment> results;
    if (!aspect.empty()) {
      const std::vector<std::string> terms{aspect};
      results = aspects::score_terms(doc, terms, *session);
    } else if (!config.aspects.empty()) {
      results = aspects::score_terms(doc, config.aspects, *session);
    } else {
      const fs::path path = require(config.out_dir / files::kAttributions /
                                        (safe_id(doc.source_id) + ".json"),
                                    "explain");
      const auto attribution = explain::attribution_from_json(read_file(path));
      const auto candidates = aspects::extract_aspects(doc, attribution, params);
      if (candidates.empty()) return;
      results = aspects::score_aspects(doc, candidates, *session);
    }
    for (const auto& r : results) per_doc[i].push_back(aspects::aspect_to_json(r));
  });
  std::vector<std::string> lines;
  for (auto& p : per_doc) lines.insert(lines.end(), p.begin(), p.end());
  const fs::path target = config.out_dir / files::kAspects;
  write_lines(target, lines);
  return {target};
}

Written cmd_report(const RunConfig& config) {
  validate(config);
  const auto records = load_run_corpus(config);
  const auto overall = load_overall(require(config.out_dir / files::kOverall, "classify"));

  report::ReportBundle bundle;
  bundle.run_config = to_json(config);
  if (!records.empty()) bundle.categories = report::category_distribution(records);
  if (!overall.empty()) bundle.stars = report::star_distribution(overall);

  const fs::path aspects_path = config.out_dir / files::kAspects;
  if (fs::exists(aspects_path)) {
    std::map<std::string, std::vector<aspects::AspectSentiment>> by_doc;
    for (auto& a : load_aspects(aspects_path)) by_doc[a.doc_id].push_back(std::move(a));
    std::vector<aspects::DivergenceFinding> findings;
    for (const auto& o : overall) {
      const auto it = by_doc.find(o.doc_id);
      if (it == by_doc.end()) continue;
      auto f = aspects::detect_divergence(o.distribution, it->second);
      findings.insert(findings.end(), f.begin(), f.end());
    }
    bundle.divergence = report::divergence_table(findings);
  }
  for (const auto& r : records) {
    const fs::path html = config.out_dir / files::kHeatmaps / (safe_id(r.arxiv_id) + ".html");
    if (fs::exists(html)) bundle.heatmaps.push_back({r.arxiv_id, read_file(html)});
  }

  const fs::path out = config.out_dir / files::kReport;
  const auto manifest = report::emit_report(
      bundle,
      {report::Format::kStructured, report::Format::kTabular, report::Format::kPlots,
       report::Format::kHeatmaps},
      out);
  Written written;
  for (const auto& f : manifest.files) written.push_back(out / f.path);
  written.push_back(out / report::kManifestFile);
  return written;
}

Written cmd_run_all(const RunConfig& config) {
  validate(config);
  Written all;
  for (auto step : {cmd_fetch, cmd_classify}) {
    auto w = step(config);
    all.insert(all.end(), w.begin(), w.end());
  }
  for (auto& w : {cmd_explain(config), cmd_aspects(config), cmd_report(config)}) {
    all.insert(all.end(), w.begin(), w.end());
  }
  return all;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"xabsa: explainable aspect-level sentiment over arXiv abstracts"};
  app.set_config("--config", "", "Config file (TOML or INI); flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  std::uint64_t seed = 0;
  std::string corpus_file, overall_lexicon, aspect_lexicon, out_dir = "run", cache_dir;
  app.add_option("--query", c.query_term, "Search term")->capture_default_str();
  app.add_option("--from", c.window_start, "First submission date, YYYY-MM-DD")
      ->capture_default_str();
  app.add_option("--to", c.window_end, "Last submission date, YYYY-MM-DD")
      ->capture_default_str();
  app.add_option("--page-size", c.page_size)->capture_default_str();
  app.add_option("--request-delay", c.request_delay_seconds, "Seconds between requests")
      ->capture_default_str();
  app.add_option("--max-retries", c.max_retries)->capture_default_str();
  app.add_option("--arxiv-url", c.arxiv_base_url)->envname(std::string(arxiv::kBaseUrlEnv));
  app.add_option("--corpus", corpus_file, "Use a prefetched corpus (JSON lines)");
  app.add_option("--overall-model", c.overall_model)->capture_default_str();
  app.add_option("--overall-revision", c.overall_revision);
  app.add_option("--aspect-model", c.aspect_model)->capture_default_str();
  app.add_option("--aspect-revision", c.aspect_revision);
  app.add_option("--model-endpoint", c.model_endpoint)
      ->envname(std::string(inference::kModelEndpointEnv));
  app.add_option("--overall-lexicon", overall_lexicon);
  app.add_option("--aspect-lexicon", aspect_lexicon);
  app.add_option("--estimator", c.estimator)
      ->check(CLI::IsMember({"exact", "permutation", "hierarchical"}))
      ->capture_default_str();
  app.add_option("--samples", c.samples, "Permutations per Shapley estimate")
      ->capture_default_str();
  app.add_option("--word-samples", c.word_samples)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--exact-limit", c.exact_limit)->capture_default_str();
  app.add_option("--top-k", c.hierarchy_k, "Sentences refined at word level")
      ->capture_default_str();
  app.add_option("--target-label", c.target_label);
  app.add_option("--tau", c.tau_quantile, "Salience quantile threshold")->capture_default_str();
  app.add_option("--max-candidates", c.max_candidates)->capture_default_str();
  app.add_option("--aspects", c.aspects, "Explicit aspect terms");
  app.add_option("--out", out_dir, "Run directory")->capture_default_str();
  app.add_option("--cache-dir", cache_dir);
  app.add_flag("--no-cache", c.no_cache);
  app.add_option("--parallelism", c.parallelism)->capture_default_str();

  std::string doc_id, target, aspect;
  auto* fetch = app.add_subcommand("fetch", "Fetch the corpus");
  auto* classify = app.add_subcommand("classify", "Overall star rating per document");
  auto* explain = app.add_subcommand("explain", "Shapley attributions and heatmaps");
  explain->add_option("doc_id", doc_id, "Single document");
  explain->add_option("--target", target, "Label to explain");
  auto* aspects_cmd = app.add_subcommand("aspects", "Aspect extraction and polarity");
  aspects_cmd->add_option("doc_id", doc_id, "Single document");
  aspects_cmd->add_option("--aspect", aspect, "Score this term only");
  auto* report_cmd = app.add_subcommand("report", "Aggregate report");
  auto* run_all = app.add_subcommand("run-all", "All stages in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  c.seed = seed;
  c.corpus_file = corpus_file;
  c.overall_lexicon = overall_lexicon;
  c.aspect_lexicon = aspect_lexicon;
  c.out_dir = out_dir;
  c.cache_dir = cache_dir;

  try {
    Written written;
    if (fetch->parsed()) {
      written = cmd_fetch(c);
    } else if (classify->parsed()) {
      written = cmd_classify(c);
    } else if (explain->parsed()) {
      written = cmd_explain(c, doc_id, target);
      if (!doc_id.empty()) std::cout << read_file(written.back());
    } else if (aspects_cmd->parsed()) {
      written = cmd_aspects(c, doc_id, aspect);
    } else if (report_cmd->parsed()) {
      written = cmd_report(c);
    } else if (run_all->parsed()) {
      written = cmd_run_all(c);
    }
    for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace xabsa::pipeline
