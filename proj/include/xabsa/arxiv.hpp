// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Client for the arXiv export API (Atom feeds).

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/corpus.hpp"

namespace xabsa::arxiv {

struct FeedEntry {
  corpus::PaperRecord record;
  int version = 1;
};

struct ParsedFeed {
  std::vector<FeedEntry> entries;
  std::vector<std::string> warnings;  // one per skipped entry
  std::size_t total_results = 0;      // opensearch:totalResults, 0 if absent
};

/// Parses one Atom page. Entries missing an id, title, publication date or
/// valid category are skipped with a warning. Titles and abstracts have
/// their whitespace collapsed. Throws DataError when the document itself is
/// not a feed.
ParsedFeed parse_feed(std::string_view xml, Timestamp fetched_at);

/// Splits "http://arxiv.org/abs/2304.10513v2" into ("2304.10513", 2).
std::pair<std::string, int> split_entry_id(std::string_view id_url);

struct FeedRequest {
  std::string search_query;
  std::size_t start = 0;
  std::size_t max_results = 100;
};

/// Returns the raw feed body for one page. Throws TransportError.
class FeedTransport {
 public:
  virtual ~FeedTransport() = default;
  virtual std::string get(const FeedRequest& request) = 0;
};

/// Plain HTTP(S) GET against `base_url` (e.g. http://export.arxiv.org/api/query).
class HttpFeedTransport : public FeedTransport {
 public:
  explicit HttpFeedTransport(std::string base_url,
                             std::chrono::seconds timeout = std::chrono::seconds(60));
  std::string get(const FeedRequest& request) override;

  static std::string encode_query(const FeedRequest& request);

 private:
  std::string scheme_host_;
  std::string path_;
  std::chrono::seconds timeout_;
};

inline constexpr std::string_view kDefaultBaseUrl =
    "http://export.arxiv.org/api/query";
inline constexpr std::string_view kBaseUrlEnv = "XABSA_ARXIV_BASE_URL";

struct FetchOptions {
  std::size_t page_size = 100;
  std::chrono::milliseconds request_delay{3000};
  int max_retries = 3;
  std::optional<Timestamp> fetched_at;  // defaults to the wall clock
};

struct FetchResult {
  std::vector<corpus::PaperRecord> records;
  std::vector<std::string> warnings;
  std::size_t requests = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Field-restricted search for `term` in title or abstract within `window`.
std::string build_search_query(std::string_view term, const DateWindow& window);

/// Pages through the feed until exhausted, re-filters locally (case-insensitive
/// substring in title or abstract, submission date in window) and keeps the
/// highest version per id, in order of first appearance.
FetchResult fetch_papers(FeedTransport& transport, std::string_view query_term,
                         const DateWindow& window, const FetchOptions& options,
                         const Sleeper& sleep = {});

}  // namespace xabsa::arxiv
