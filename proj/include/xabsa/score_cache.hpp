// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xabsa/inference.hpp"

namespace xabsa::inference {

struct CacheKey {
  std::string model_id;
  std::string revision_pin;
  Task task = Task::kOverallSentiment;
  std::string text_digest;
  std::string aspect_digest;

  /// Content address of the key.
  std::string digest() const;
};

struct CachedScores {
  std::vector<double> probabilities;  // declared label order
  bool truncated = false;
};

/// Content-addressed score cache. Always memory-backed; when constructed with
/// a directory, entries are also persisted one file per key and read back on
/// a memory miss. Concurrent lookups share a lock, inserts take it exclusively.
class ScoreCache {
 public:
  ScoreCache() = default;
  explicit ScoreCache(std::filesystem::path directory);

  std::optional<CachedScores> lookup(const CacheKey& key) const;
  void insert(const CacheKey& key, const ModelSpec& spec,
              const CachedScores& scores);

  std::size_t size() const;
  std::size_t hits() const;

 private:
  std::optional<std::filesystem::path> directory_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, CachedScores> entries_;
  mutable std::atomic<std::size_t> hits_{0};
};

}  // namespace xabsa::inference
