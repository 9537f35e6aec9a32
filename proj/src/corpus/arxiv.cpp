// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/arxiv.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "httplib.h"
#include "xabsa/error.hpp"

namespace xabsa::arxiv {
namespace {

namespace pt = boost::property_tree;

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (is_ascii_alnum(static_cast<char>(c)) || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

std::string compact_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::optional<FeedEntry> parse_entry(const pt::ptree& entry,
                                     Timestamp fetched_at, std::string& why) {
  const auto id_url = entry.get_optional<std::string>("id");
  if (!id_url || trim(*id_url).empty()) {
    why = "entry without <id>";
    return std::nullopt;
  }
  FeedEntry out;
  std::tie(out.record.arxiv_id, out.version) = split_entry_id(trim(*id_url));
  const std::string& id = out.record.arxiv_id;
  if (id.empty()) {
    why = "entry with unusable id '" + *id_url + "'";
    return std::nullopt;
  }

  out.record.title = collapse_whitespace(entry.get<std::string>("title", ""));
  out.record.abstract = collapse_whitespace(entry.get<std::string>("summary", ""));
  if (out.record.title.empty()) {
    why = "entry " + id + " has no title";
    return std::nullopt;
  }

  const auto published = entry.get_optional<std::string>("published");
  std::optional<Timestamp> ts;
  if (published) ts = parse_timestamp(trim(*published));
  if (!ts) {
    why = "entry " + id + " has a missing or malformed <published> date";
    return std::nullopt;
  }
  out.record.submitted = Date(std::chrono::floor<std::chrono::days>(*ts));
  out.record.fetched_at = fetched_at;

  // Feeds also list ACM and MSC classes ("I.2.7", "68T50") as categories.
  auto push_category = [&](const std::string& term) {
    if (!corpus::is_valid_category(term)) return;
    if (std::find(out.record.categories.begin(), out.record.categories.end(),
                  term) == out.record.categories.end()) {
      out.record.categories.push_back(term);
    }
  };
  if (auto primary = entry.get_optional<std::string>(
          "arxiv:primary_category.<xmlattr>.term")) {
    push_category(std::string(trim(*primary)));
  }
  for (const auto& [name, child] : entry) {
    if (name != "category") continue;
    if (auto term = child.get_optional<std::string>("<xmlattr>.term")) {
      push_category(std::string(trim(*term)));
    }
  }
  if (auto problem = corpus::validate(out.record)) {
    why = "entry " + id + ": " + *problem;
    return std::nullopt;
  }
  return out;
}

}  // namespace

std::pair<std::string, int> split_entry_id(std::string_view id_url) {
  if (auto pos = id_url.find("/abs/"); pos != std::string_view::npos) {
    id_url.remove_prefix(pos + 5);
  }
  int version = 1;
  const auto v = id_url.rfind('v');
  if (v != std::string_view::npos && v + 1 < id_url.size() && v > 0 &&
      std::all_of(id_url.begin() + static_cast<std::ptrdiff_t>(v) + 1,
                  id_url.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      id_url[v - 1] >= '0' && id_url[v - 1] <= '9') {
    version = std::stoi(std::string(id_url.substr(v + 1)));
    id_url = id_url.substr(0, v);
  }
  return {std::string(id_url), version};
}

ParsedFeed parse_feed(std::string_view xml, Timestamp fetched_at) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw DataError(std::string("malformed Atom feed: ") + e.what());
  }
  const auto feed = tree.get_child_optional("feed");
  if (!feed) throw DataError("malformed Atom feed: no <feed> root");

  ParsedFeed parsed;
  parsed.total_results = feed->get<std::size_t>("opensearch:totalResults", 0);
  std::size_t index = 0;
  for (const auto& [name, child] : *feed) {
    if (name != "entry") continue;
    std::string why;
    if (auto entry = parse_entry(child, fetched_at, why)) {
      parsed.entries.push_back(std::move(*entry));
    } else {
      parsed.warnings.push_back("skipped feed entry " + std::to_string(index) +
                                ": " + why);
    }
    ++index;
  }
  return parsed;
}

HttpFeedTransport::HttpFeedTransport(std::string base_url,
                                     std::chrono::seconds timeout)
    : timeout_(timeout) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("arXiv base URL needs a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  scheme_host_ = base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : base_url.substr(path_start);
}

std::string HttpFeedTransport::encode_query(const FeedRequest& request) {
  return "search_query=" + percent_encode(request.search_query) +
         "&start=" + std::to_string(request.start) +
         "&max_results=" + std::to_string(request.max_results) +
         "&sortBy=submittedDate&sortOrder=ascending";
}

std::string HttpFeedTransport::get(const FeedRequest& request) {
  httplib::Client client(scheme_host_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  auto res = client.Get(path_ + "?" + encode_query(request));
  if (!res) {
    throw TransportError("GET " + scheme_host_ + path_ + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("GET " + scheme_host_ + path_ + " returned HTTP " +
                         std::to_string(res->status));
  }
  return res->body;
}

std::string build_search_query(std::string_view term, const DateWindow& window) {
  const std::string t(term);
  return "(ti:\"" + t + "\" OR abs:\"" + t + "\") AND submittedDate:[" +
         compact_date(window.first) + "0000 TO " + compact_date(window.last) +
         "2359]";
}

FetchResult fetch_papers(FeedTransport& transport, std::string_view query_term,
                         const DateWindow& window, const FetchOptions& options,
                         const Sleeper& sleep) {
  if (trim(query_term).empty()) throw ConfigError("query term is empty");
  if (window.last < window.first) throw ConfigError("date window is inverted");
  if (options.page_size < 1 || options.page_size > 2000) {
    throw ConfigError("page size must be in [1, 2000]");
  }
  const Sleeper pause = sleep ? sleep : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  FetchResult result;
  std::vector<FeedEntry> kept;
  std::map<std::string, std::size_t> index_of;
  FeedRequest request{build_search_query(query_term, window), 0,
                      options.page_size};

  while (true) {
    std::string body;
    for (int attempt = 0;; ++attempt) {
      if (result.requests > 0) pause(options.request_delay);
      ++result.requests;
      try {
        body = transport.get(request);
        break;
      } catch (const TransportError& e) {
        if (attempt >= options.max_retries) {
          throw TransportError(std::string(e.what()) + " (after " +
                               std::to_string(attempt + 1) + " attempts)");
        }
      }
    }
    auto page = parse_feed(body, options.fetched_at.value_or(now_seconds()));
    const std::size_t received = page.entries.size() + page.warnings.size();
    for (auto& w : page.warnings) result.warnings.push_back(std::move(w));
    for (auto& entry : page.entries) {
      const auto& r = entry.record;
      if (!window.contains(r.submitted)) continue;
      if (!contains_ci(r.title, query_term) && !contains_ci(r.abstract, query_term)) {
        continue;
      }
      auto [it, inserted] = index_of.try_emplace(r.arxiv_id, kept.size());
      if (inserted) {
        kept.push_back(std::move(entry));
      } else if (entry.version > kept[it->second].version) {
        kept[it->second] = std::move(entry);
      }
    }
    request.start += received;
    if (received == 0) break;
    // Without a total, a short page means the feed is exhausted.
    if (page.total_results > 0 ? request.start >= page.total_results
                               : received < request.max_results) {
      break;
    }
  }
  result.records.reserve(kept.size());
  for (auto& e : kept) result.records.push_back(std::move(e.record));
  return result;
}

}  // namespace xabsa::arxiv
