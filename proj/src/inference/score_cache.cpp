// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/score_cache.hpp"

#include <filesystem>
#include <mutex>

#include "json.hpp"
#include "xabsa/digest.hpp"
#include "xabsa/error.hpp"
#include "xabsa/fileio.hpp"
#include "xabsa/timeutil.hpp"

namespace xabsa::inference {

using nlohmann::json;

std::string CacheKey::digest() const {
  std::string material;
  for (std::string_view part : {std::string_view(model_id),
                                std::string_view(revision_pin), to_string(task),
                                std::string_view(text_digest),
                                std::string_view(aspect_digest)}) {
    material += part;
    material += '\x1f';
  }
  return sha256_hex(material);
}

ScoreCache::ScoreCache(std::filesystem::path directory)
    : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(*directory_, ec);
  if (ec) {
    throw ConfigError("cannot create cache directory " + directory_->string() +
                      ": " + ec.message());
  }
}

std::optional<CachedScores> ScoreCache::lookup(const CacheKey& key) const {
  const std::string address = key.digest();
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(address); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  if (!directory_) return std::nullopt;
  const auto path = *directory_ / (address + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;

  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.contains("probabilities")) {
    throw DataError("corrupt cache entry " + path.string());
  }
  CachedScores scores;
  scores.probabilities = j.at("probabilities").get<std::vector<double>>();
  scores.truncated = j.value("truncated", false);
  std::unique_lock write(mutex_);
  ++hits_;
  entries_.emplace(address, scores);
  return scores;
}

void ScoreCache::insert(const CacheKey& key, const ModelSpec& spec,
                        const CachedScores& scores) {
  const std::string address = key.digest();
  {
    std::unique_lock lock(mutex_);
    if (!entries_.emplace(address, scores).second) return;
  }
  if (!directory_) return;
  const auto path = *directory_ / (address + ".json");
  if (std::filesystem::exists(path)) return;
  json entries = json::array();
  for (std::size_t i = 0; i < scores.probabilities.size(); ++i) {
    entries.push_back({{"label", spec.label_set.at(i)},
                       {"score", scores.probabilities[i]}});
  }
  json j = {{"model_id", key.model_id},
            {"revision_pin", key.revision_pin},
            {"task", to_string(key.task)},
            {"text_digest", key.text_digest},
            {"aspect_digest", key.aspect_digest},
            {"entries", entries},
            {"probabilities", scores.probabilities},
            {"truncated", scores.truncated},
            {"created_at", format_timestamp(now_seconds())}};
  write_file_atomic(path, j.dump(2) + "\n");
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::size_t ScoreCache::hits() const { return hits_.load(); }

}  // namespace xabsa::inference
