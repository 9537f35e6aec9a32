// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/classifier.hpp"
#include "xabsa/score_cache.hpp"

namespace xabsa::inference {

/// Inputs longer than the model window (counted in whitespace-delimited
/// units) are cut after the last unit that fits.
struct Truncated {
  std::string_view text;
  bool truncated = false;
};
Truncated truncate_units(std::string_view text, std::size_t max_units);

/// Front door to a classifier: validation, truncation, caching and batching.
/// Adapters that are not safe for concurrent use are serialized here.
class ClassifierSession {
 public:
  explicit ClassifierSession(std::shared_ptr<Classifier> classifier,
                             std::shared_ptr<ScoreCache> cache = nullptr,
                             std::size_t batch_size = 64);

  const ModelSpec& spec() const { return classifier_->spec(); }
  std::optional<std::string> mask_token() const { return classifier_->mask_token(); }

  LabelDistribution classify_overall(std::string_view text);
  LabelDistribution classify_aspect(std::string_view text, std::string_view aspect);

  /// Element-wise equal to the single-item calls. Empty texts (or empty
  /// aspects for aspect models) raise BatchItemError with their index.
  std::vector<LabelDistribution> classify_batch(std::span<const ClassifierInput> inputs);
  std::vector<LabelDistribution> classify_batch(std::span<const std::string> texts);

 private:
  // origin[i] is the caller's index of chunk[i], for error reports.
  std::vector<std::vector<double>> predict_chunk(std::span<const ClassifierInput> chunk,
                                                 std::span<const std::size_t> origin);

  std::shared_ptr<Classifier> classifier_;
  std::shared_ptr<ScoreCache> cache_;
  std::size_t batch_size_;
  std::mutex serial_;
};

}  // namespace xabsa::inference
