// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/corpus.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "xabsa/error.hpp"
#include "xabsa/fileio.hpp"

namespace xabsa::corpus {
namespace {

using nlohmann::json;

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

// Tokens (lowercased, with the trailing period) that never end a sentence.
constexpr std::array<std::string_view, 32> kAbbreviations = {
    "e.g.", "i.e.", "al.",   "vs.",  "cf.",  "fig.",   "figs.", "eq.",
    "eqs.", "dr.",  "mr.",   "mrs.", "ms.",  "prof.",  "no.",   "nos.",
    "approx.", "resp.", "sec.", "ref.", "refs.", "vol.", "pp.", "ch.",
    "st.",  "jr.",  "inc.",  "ltd.", "co.",  "u.s.",   "viz.",  "ca."};

bool ends_with_abbreviation(std::string_view text, std::size_t period) {
  std::size_t begin = period;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < period && is_opener(text[begin])) ++begin;
  const std::string token = to_lower(text.substr(begin, period - begin + 1));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

// [letters/hyphen segment] with each segment starting with a letter.
bool is_category_part(std::string_view s, bool allow_upper) {
  if (s.empty()) return false;
  bool segment_start = true;
  for (char c : s) {
    if (c == '-') {
      if (segment_start) return false;
      segment_start = true;
      continue;
    }
    if (!(is_lower(c) || (allow_upper && is_upper(c)))) return false;
    segment_start = false;
  }
  return !segment_start;
}

template <typename T>
T required(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw DataError(std::string("missing required field '") + key + "'", line);
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type", line);
  }
}

}  // namespace

bool is_valid_category(std::string_view code) {
  const auto dot = code.find('.');
  if (dot == std::string_view::npos) return is_category_part(code, false);
  return is_category_part(code.substr(0, dot), false) &&
         is_category_part(code.substr(dot + 1), true);
}

std::optional<std::string> validate(const PaperRecord& record) {
  if (record.arxiv_id.empty()) return "arxiv_id is empty";
  if (record.title.empty()) return "title is empty";
  if (record.categories.empty()) return "categories is empty";
  for (const auto& c : record.categories) {
    if (!is_valid_category(c)) return "invalid category code '" + c + "'";
  }
  if (!record.submitted.ok()) return "submitted is not a valid date";
  return std::nullopt;
}

std::vector<Span> segment_sentences(std::string_view text) {
  std::vector<Span> spans;
  const std::size_t n = text.size();
  std::size_t start = 0;
  while (start < n && is_space(text[start])) ++start;
  if (start == n) return spans;

  for (std::size_t i = start; i < n; ++i) {
    if (!is_terminal(text[i])) continue;
    std::size_t end = i + 1;
    while (end < n && is_closer(text[end])) ++end;
    if (end >= n || !is_space(text[end])) continue;
    std::size_t next = end;
    while (next < n && is_space(text[next])) ++next;
    if (next >= n) continue;
    std::size_t probe = next;
    if (is_opener(text[probe]) && probe + 1 < n) ++probe;
    if (!is_upper(text[probe]) && !is_digit(text[probe])) continue;
    if (text[i] == '.' && ends_with_abbreviation(text, i)) continue;
    spans.push_back({start, end});
    start = next;
    i = next - 1;
  }
  std::size_t last = n;
  while (last > start && is_space(text[last - 1])) --last;
  if (last > start) spans.push_back({start, last});
  return spans;
}

std::string normalize_title(std::string_view title) {
  std::string out(trim(title));
  if (!out.empty() && !is_terminal(out.back())) out.push_back('.');
  return out;
}

AbstractDocument build_document(const PaperRecord& record) {
  if (trim(record.title).empty()) {
    throw ConfigError("cannot build a document for '" + record.arxiv_id +
                      "': title is empty");
  }
  AbstractDocument doc;
  doc.source_id = record.arxiv_id;
  doc.text = normalize_title(record.title);
  if (trim(record.abstract).empty()) {
    doc.degenerate = true;
  } else {
    doc.text += ' ';
    doc.text += record.abstract;
  }
  doc.sentences = segment_sentences(doc.text);
  doc.char_count = doc.text.size();
  doc.sentence_count = doc.sentences.size();
  return doc;
}

CorpusStats corpus_stats(std::span<const AbstractDocument> docs,
                         std::span<const PaperRecord> records) {
  if (docs.empty()) throw ConfigError("corpus_stats: empty corpus");
  CorpusStats stats;
  stats.document_count = docs.size();
  std::size_t total = 0;
  for (const auto& d : docs) {
    total += d.sentence_count;
    stats.max_sentences = std::max(stats.max_sentences, d.sentence_count);
  }
  stats.mean_sentences =
      static_cast<double>(total) / static_cast<double>(docs.size());
  for (const auto& r : records) {
    if (!r.categories.empty()) ++stats.category_counts[r.primary_category()];
  }
  return stats;
}

std::string to_json_line(const PaperRecord& record) {
  json j = {{"arxiv_id", record.arxiv_id},
            {"title", record.title},
            {"abstract", record.abstract},
            {"categories", record.categories},
            {"submitted", format_date(record.submitted)},
            {"fetched_at", format_timestamp(record.fetched_at)}};
  return j.dump();
}

PaperRecord from_json_line(std::string_view line, std::size_t line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError("not a JSON object", line_number);
  }
  PaperRecord r;
  r.arxiv_id = required<std::string>(j, "arxiv_id", line_number);
  r.title = required<std::string>(j, "title", line_number);
  r.abstract = required<std::string>(j, "abstract", line_number);
  r.categories = required<std::vector<std::string>>(j, "categories", line_number);
  const auto submitted = required<std::string>(j, "submitted", line_number);
  const auto fetched = required<std::string>(j, "fetched_at", line_number);
  auto date = parse_date(submitted);
  if (!date) throw DataError("bad submitted date '" + submitted + "'", line_number);
  auto ts = parse_timestamp(fetched);
  if (!ts) throw DataError("bad fetched_at timestamp '" + fetched + "'", line_number);
  r.submitted = *date;
  r.fetched_at = *ts;
  if (auto problem = validate(r)) throw DataError(*problem, line_number);
  return r;
}

void save_corpus(std::span<const PaperRecord> corpus,
                 const std::filesystem::path& path) {
  std::set<std::string_view> seen;
  std::string out;
  for (const auto& r : corpus) {
    if (auto problem = validate(r)) {
      throw ConfigError("refusing to save invalid record: " + *problem);
    }
    if (!seen.insert(r.arxiv_id).second) {
      throw ConfigError("duplicate arxiv_id " + r.arxiv_id);
    }
    out += to_json_line(r);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<PaperRecord> load_corpus(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<PaperRecord> corpus;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    auto record = from_json_line(line, line_number);
    if (!seen.insert(record.arxiv_id).second) {
      throw DataError("duplicate arxiv_id " + record.arxiv_id, line_number);
    }
    corpus.push_back(std::move(record));
  }
  return corpus;
}

}  // namespace xabsa::corpus
