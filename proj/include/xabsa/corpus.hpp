// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Paper metadata records, title-prefixed abstract documents, sentence
// segmentation and the line-delimited corpus file.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/text.hpp"
#include "xabsa/timeutil.hpp"

namespace xabsa::corpus {

/// One arXiv entry.
struct PaperRecord {
  std::string arxiv_id;  // versionless, e.g. "2304.10513"
  std::string title;
  std::string abstract;
  std::vector<std::string> categories;  // first = primary
  Date submitted;
  Timestamp fetched_at;

  const std::string& primary_category() const { return categories.front(); }

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// True for codes like "cs.CL", "stat.ML", "hep-th" or "physics.soc-ph".
bool is_valid_category(std::string_view code);

/// Checks the record-level invariants; returns the first violation, if any.
std::optional<std::string> validate(const PaperRecord& record);

/// Title sentence + abstract, segmented into sentences.
struct AbstractDocument {
  std::string source_id;
  std::string text;
  std::vector<Span> sentences;
  std::size_t char_count = 0;
  std::size_t sentence_count = 0;
  bool degenerate = false;  // abstract was empty

  std::string_view sentence(std::size_t i) const {
    return sentences.at(i).of(text);
  }
};

/// Rule-based segmentation: a sentence ends at '.', '!' or '?' (plus any
/// closing quotes/brackets) followed by whitespace and an uppercase letter or
/// digit, unless the token ending there is a known abbreviation. Spans are
/// trimmed of surrounding whitespace. Text with no boundary yields one span.
std::vector<Span> segment_sentences(std::string_view text);

/// Appends "." to a title lacking terminal punctuation.
std::string normalize_title(std::string_view title);

/// Throws ConfigError on an empty title.
AbstractDocument build_document(const PaperRecord& record);

struct CorpusStats {
  std::size_t document_count = 0;
  double mean_sentences = 0.0;
  std::size_t max_sentences = 0;
  std::map<std::string, std::size_t> category_counts;  // by primary category
};

/// Category counts are filled only from records; pass an empty span when only
/// documents are available. Throws ConfigError on an empty corpus.
CorpusStats corpus_stats(std::span<const AbstractDocument> docs,
                         std::span<const PaperRecord> records = {});

std::string to_json_line(const PaperRecord& record);
/// Throws DataError carrying `line` on schema violations.
PaperRecord from_json_line(std::string_view line, std::size_t line_number);

void save_corpus(std::span<const PaperRecord> corpus,
                 const std::filesystem::path& path);
std::vector<PaperRecord> load_corpus(const std::filesystem::path& path);

}  // namespace xabsa::corpus
