// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/report.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "xabsa/digest.hpp"
#include "xabsa/error.hpp"
#include "xabsa/fileio.hpp"
#include "xabsa/heatmap.hpp"

namespace xabsa::report {
namespace {

using nlohmann::json;

const Bucket& find_bucket(const std::vector<Bucket>& buckets, std::string_view key) {
  for (const auto& b : buckets) {
    if (b.key == key) return b;
  }
  throw ConfigError("no bucket '" + std::string(key) + "'");
}

json buckets_json(const std::vector<Bucket>& buckets) {
  json out = json::array();
  for (const auto& b : buckets) {
    out.push_back({{"key", b.key}, {"count", b.count}, {"percent", b.percent()}});
  }
  return out;
}

std::string bucket_table(std::string_view title, std::string_view key_header,
                         const std::vector<Bucket>& buckets, std::size_t total) {
  std::size_t width = key_header.size();
  for (const auto& b : buckets) width = std::max(width, b.key.size());
  std::string out = fmt::format("{}\n", title);
  out += fmt::format("{:<{}}  {:>7}  {:>7}\n", key_header, width, "count", "percent");
  for (const auto& b : buckets) {
    out += fmt::format("{:<{}}  {:>7}  {:>7}\n", b.key, width, b.count,
                       format_tenths(b.tenths));
  }
  out += fmt::format("{:<{}}  {:>7}\n", "total", width, total);
  return out;
}

}  // namespace

std::int64_t percent_tenths(std::size_t count, std::size_t total) {
  if (total == 0) throw ConfigError("percentage of an empty total");
  const auto c = static_cast<std::int64_t>(count);
  const auto t = static_cast<std::int64_t>(total);
  return (2000 * c + t) / (2 * t);
}

std::string format_tenths(std::int64_t tenths) {
  const char* sign = tenths < 0 ? "-" : "";
  const std::int64_t a = tenths < 0 ? -tenths : tenths;
  return fmt::format("{}{}.{}", sign, a / 10, a % 10);
}

const Bucket& StarDistributionReport::at(std::string_view label) const {
  return find_bucket(buckets, label);
}

const Bucket& CategoryDistributionReport::at(std::string_view category) const {
  return find_bucket(buckets, category);
}

StarDistributionReport star_distribution(std::span<const OverallResult> results) {
  if (results.empty()) throw ConfigError("star_distribution: no results");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : results) ++counts[inference::top_label(r.distribution)];
  StarDistributionReport report;
  report.total_docs = results.size();
  for (const auto& label : inference::star_labels()) {
    const std::size_t c = counts.contains(label) ? counts.at(label) : 0;
    report.buckets.push_back({label, c, percent_tenths(c, results.size())});
    counts.erase(label);
  }
  if (!counts.empty()) {
    throw ConfigError("star_distribution: non-star label '" + counts.begin()->first + "'");
  }
  return report;
}

CategoryDistributionReport category_distribution(
    std::span<const corpus::PaperRecord> corpus) {
  if (corpus.empty()) throw ConfigError("category_distribution: empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : corpus) {
    if (r.categories.empty()) {
      throw ConfigError("record " + r.arxiv_id + " has no category");
    }
    ++counts[r.primary_category()];
  }
  CategoryDistributionReport report;
  report.total_docs = corpus.size();
  for (const auto& [key, c] : counts) {
    report.buckets.push_back({key, c, percent_tenths(c, corpus.size())});
  }
  std::stable_sort(report.buckets.begin(), report.buckets.end(),
                   [](const Bucket& a, const Bucket& b) { return a.count > b.count; });
  return report;
}

std::string DivergenceTable::summary() const {
  return fmt::format("{} / {}", divergent, rows.size());
}

std::string DivergenceTable::render() const {
  std::size_t id_w = 6, star_w = 7, aspect_w = 6;
  for (const auto& r : rows) {
    id_w = std::max(id_w, r.doc_id.size());
    star_w = std::max(star_w, r.overall_star.size());
    aspect_w = std::max(aspect_w, r.aspect.size());
  }
  std::string out = "Overall vs aspect polarity\n";
  out += fmt::format("{:<{}}  {:<{}}  {:<8}  {:<{}}  {:<8}  {}\n", "doc_id", id_w,
                     "overall", star_w, "polarity", "aspect", aspect_w, "polarity",
                     "divergent");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:<8}  {:<{}}  {:<8}  {}\n", r.doc_id, id_w,
                       r.overall_star, star_w, inference::to_string(r.overall_polarity),
                       r.aspect, aspect_w, inference::to_string(r.aspect_polarity),
                       r.divergent ? "yes" : "no");
  }
  out += "divergent: " + summary() + "\n";
  return out;
}

DivergenceTable divergence_table(std::span<const aspects::DivergenceFinding> findings) {
  DivergenceTable table;
  table.rows.assign(findings.begin(), findings.end());
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const aspects::DivergenceFinding& a,
                      const aspects::DivergenceFinding& b) {
                     if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
                     return a.aspect < b.aspect;
                   });
  table.divergent = static_cast<std::size_t>(
      std::count_if(table.rows.begin(), table.rows.end(),
                    [](const auto& r) { return r.divergent; }));
  return table;
}

json structured_report(const ReportBundle& bundle) {
  json j = {{"schema", "xabsa.report"},
            {"schema_version", kReportSchemaVersion},
            {"config", bundle.run_config}};
  if (bundle.stars) {
    j["star_distribution"] = {
        {"total_docs", bundle.stars->total_docs},
        {"bucket_rule", "each document counted once under the argmax label of its "
                        "5-star distribution"},
        {"buckets", buckets_json(bundle.stars->buckets)}};
  }
  if (bundle.categories) {
    j["category_distribution"] = {
        {"total_docs", bundle.categories->total_docs},
        {"bucket_rule", "each record counted once under its first-listed category"},
        {"buckets", buckets_json(bundle.categories->buckets)}};
  }
  if (bundle.divergence) {
    json rows = json::array();
    for (const auto& r : bundle.divergence->rows) {
      rows.push_back({{"doc_id", r.doc_id},
                      {"overall_star", r.overall_star},
                      {"overall_polarity", inference::to_string(r.overall_polarity)},
                      {"aspect", r.aspect},
                      {"aspect_polarity", inference::to_string(r.aspect_polarity)},
                      {"divergent", r.divergent}});
    }
    j["divergence"] = {{"rows", rows},
                       {"divergent", bundle.divergence->divergent},
                       {"total", bundle.divergence->rows.size()}};
  }
  return j;
}

std::optional<std::string> check_structured_report(const json& report) {
  if (!report.is_object()) return "report is not an object";
  if (report.value("schema", "") != "xabsa.report") return "wrong schema name";
  if (report.value("schema_version", 0) != kReportSchemaVersion) {
    return "unsupported schema_version";
  }
  if (!report.contains("config") || !report.at("config").is_object()) {
    return "missing config object";
  }
  for (const char* key : {"star_distribution", "category_distribution"}) {
    if (!report.contains(key)) continue;
    const auto& section = report.at(key);
    if (!section.contains("total_docs") || !section.at("total_docs").is_number_unsigned()) {
      return std::string(key) + ".total_docs missing";
    }
    if (!section.contains("buckets") || !section.at("buckets").is_array()) {
      return std::string(key) + ".buckets missing";
    }
    std::size_t count_sum = 0;
    for (const auto& b : section.at("buckets")) {
      if (!b.contains("key") || !b.at("key").is_string() || !b.contains("count") ||
          !b.at("count").is_number_unsigned() || !b.contains("percent") ||
          !b.at("percent").is_number()) {
        return std::string(key) + " has a malformed bucket";
      }
      count_sum += b.at("count").get<std::size_t>();
    }
    if (count_sum != section.at("total_docs").get<std::size_t>()) {
      return std::string(key) + " counts do not sum to total_docs";
    }
  }
  if (report.contains("divergence")) {
    const auto& d = report.at("divergence");
    if (!d.contains("rows") || !d.at("rows").is_array() || !d.contains("divergent") ||
        !d.contains("total")) {
      return "malformed divergence section";
    }
    if (d.at("total").get<std::size_t>() != d.at("rows").size()) {
      return "divergence total does not match rows";
    }
  }
  return std::nullopt;
}

std::string bar_chart_svg(std::string_view title, std::span<const Bucket> buckets) {
  constexpr int kBarWidth = 56, kGap = 24, kLeft = 48, kTop = 48, kPlotHeight = 240;
  const int width = kLeft * 2 + static_cast<int>(buckets.size()) * (kBarWidth + kGap);
  const int height = kTop + kPlotHeight + 72;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                     width / 2, explain::html_escape(title));
  const int axis_y = kTop + kPlotHeight;
  out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
                     kLeft - 8, axis_y, width - kLeft + 8, axis_y);
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const auto& b = buckets[i];
    const int x = kLeft + static_cast<int>(i) * (kBarWidth + kGap) + kGap / 2;
    const int h = static_cast<int>(b.tenths * kPlotHeight / 1000);
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4c72b0\"/>\n", x,
        axis_y - h, kBarWidth, h);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}%</text>\n",
                       x + kBarWidth / 2, axis_y - h - 6, format_tenths(b.tenths));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       x + kBarWidth / 2, axis_y + 18, explain::html_escape(b.key));
  }
  out += "</svg>\n";
  return out;
}

Manifest emit_report(const ReportBundle& bundle, const std::set<Format>& formats,
                     const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::string, std::string>> files;
  if (formats.contains(Format::kStructured)) {
    files.emplace_back("report.json", structured_report(bundle).dump(2) + "\n");
  }
  if (formats.contains(Format::kTabular)) {
    std::string tables;
    if (bundle.stars) {
      tables += bucket_table("Star rating distribution (argmax label)", "label",
                             bundle.stars->buckets, bundle.stars->total_docs);
      tables += "\n";
    }
    if (bundle.categories) {
      tables += bucket_table("Primary category distribution", "category",
                             bundle.categories->buckets, bundle.categories->total_docs);
      tables += "\n";
    }
    if (bundle.divergence) tables += bundle.divergence->render();
    files.emplace_back("tables.txt", tables);
  }
  if (formats.contains(Format::kPlots)) {
    if (bundle.stars) {
      files.emplace_back("star_distribution.svg",
                         bar_chart_svg("Overall sentiment (1-5 stars)", bundle.stars->buckets));
    }
    if (bundle.categories) {
      files.emplace_back("category_distribution.svg",
                         bar_chart_svg("Primary arXiv category", bundle.categories->buckets));
    }
  }
  if (formats.contains(Format::kHeatmaps)) {
    std::string html =
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
        "<title>Attribution heatmaps</title></head><body>\n"
        "<p>Red spans push toward the target label, blue spans away from it; "
        "darker means stronger.</p>\n";
    for (const auto& h : bundle.heatmaps) {
      html += "<section id=\"" + explain::html_escape(h.doc_id) + "\"><h2>" +
              explain::html_escape(h.doc_id) + "</h2>\n" + h.html + "</section>\n";
    }
    html += "</body></html>\n";
    files.emplace_back("heatmaps.html", html);
  }

  Manifest manifest;
  manifest.created_at = now_seconds();
  json listing = json::array();
  for (const auto& [name, contents] : files) {
    write_file_atomic(out_dir / name, contents);
    manifest.files.push_back({name, sha256_hex(contents), contents.size()});
    listing.push_back({{"path", name}, {"sha256", manifest.files.back().sha256},
                       {"bytes", contents.size()}});
  }
  const json m = {{"created_at", format_timestamp(manifest.created_at)},
                  {"files", listing}};
  write_file_atomic(out_dir / kManifestFile, m.dump(2) + "\n");
  return manifest;
}

}  // namespace xabsa::report
