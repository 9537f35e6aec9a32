// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Corpus-level aggregation and report emission.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xabsa/aspects.hpp"
#include "xabsa/corpus.hpp"
#include "xabsa/inference.hpp"
#include "xabsa/timeutil.hpp"

namespace xabsa::report {

/// round_half_up(1000 * count / total), i.e. a percentage in tenths, computed
/// in integers so the rounding rule is exact.
std::int64_t percent_tenths(std::size_t count, std::size_t total);

/// "75.5" from 755.
std::string format_tenths(std::int64_t tenths);

struct Bucket {
  std::string key;
  std::size_t count = 0;
  std::int64_t tenths = 0;

  double percent() const { return static_cast<double>(tenths) / 10.0; }
};

/// One bucket per star label, in declared order.
struct StarDistributionReport {
  std::size_t total_docs = 0;
  std::vector<Bucket> buckets;

  const Bucket& at(std::string_view label) const;
};

/// Buckets by count descending, then category code.
struct CategoryDistributionReport {
  std::size_t total_docs = 0;
  std::vector<Bucket> buckets;

  const Bucket& at(std::string_view category) const;
};

struct OverallResult {
  std::string doc_id;
  inference::LabelDistribution distribution;
};

/// Each document counts once, under the argmax of its distribution.
StarDistributionReport star_distribution(std::span<const OverallResult> results);

/// Each record counts once, under its primary (first-listed) category.
CategoryDistributionReport category_distribution(
    std::span<const corpus::PaperRecord> corpus);

struct DivergenceTable {
  std::vector<aspects::DivergenceFinding> rows;  // by doc_id, then aspect
  std::size_t divergent = 0;

  /// "<divergent> / <rows>"
  std::string summary() const;
  /// Fixed-width text table with a trailing summary line.
  std::string render() const;
};

DivergenceTable divergence_table(std::span<const aspects::DivergenceFinding> findings);

enum class Format { kStructured, kTabular, kPlots, kHeatmaps };

struct HeatmapEntry {
  std::string doc_id;
  std::string html;  // fragment from render_heatmap
};

struct ReportBundle {
  std::optional<StarDistributionReport> stars;
  std::optional<CategoryDistributionReport> categories;
  std::optional<DivergenceTable> divergence;
  std::vector<HeatmapEntry> heatmaps;
  nlohmann::json run_config = nlohmann::json::object();
};

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct Manifest {
  std::vector<ManifestEntry> files;
  Timestamp created_at;
};

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kManifestFile = "manifest.json";

nlohmann::json structured_report(const ReportBundle& bundle);

/// First schema violation of a structured report, if any.
std::optional<std::string> check_structured_report(const nlohmann::json& report);

/// Writes the requested artifacts under `out_dir` with fixed names
/// (report.json, tables.txt, star_distribution.svg, category_distribution.svg,
/// heatmaps.html) plus manifest.json, which alone carries a timestamp.
/// Content files are byte-identical for identical bundles.
Manifest emit_report(const ReportBundle& bundle, const std::set<Format>& formats,
                     const std::filesystem::path& out_dir);

/// Horizontal-axis bar chart as standalone SVG.
std::string bar_chart_svg(std::string_view title, std::span<const Bucket> buckets);

}  // namespace xabsa::report
