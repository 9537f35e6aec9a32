// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/session.hpp"

#include <algorithm>
#include <unordered_map>

#include "xabsa/digest.hpp"
#include "xabsa/error.hpp"
#include "xabsa/text.hpp"

namespace xabsa::inference {

Truncated truncate_units(std::string_view text, std::size_t max_units) {
  std::size_t units = 0;
  std::size_t i = 0;
  std::size_t last_end = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    if (units == max_units) return {text.substr(0, last_end), true};
    while (i < text.size() && !is_space(text[i])) ++i;
    last_end = i;
    ++units;
  }
  return {text, false};
}

ClassifierSession::ClassifierSession(std::shared_ptr<Classifier> classifier,
                                     std::shared_ptr<ScoreCache> cache,
                                     std::size_t batch_size)
    : classifier_(std::move(classifier)),
      cache_(std::move(cache)),
      batch_size_(std::max<std::size_t>(1, batch_size)) {
  if (!classifier_) throw ConfigError("session needs a classifier");
}

LabelDistribution ClassifierSession::classify_overall(std::string_view text) {
  if (spec().task != Task::kOverallSentiment) {
    throw ConfigError(spec().model_id + " is not an overall-sentiment model");
  }
  const ClassifierInput in{text, {}};
  try {
    return classify_batch(std::span(&in, 1)).front();
  } catch (const BatchItemError&) {
    throw ConfigError("classify_overall: empty text");
  }
}

LabelDistribution ClassifierSession::classify_aspect(std::string_view text,
                                                     std::string_view aspect) {
  if (spec().task != Task::kAspectSentiment) {
    throw ConfigError(spec().model_id + " is not an aspect-sentiment model");
  }
  const ClassifierInput in{text, aspect};
  try {
    return classify_batch(std::span(&in, 1)).front();
  } catch (const BatchItemError&) {
    throw ConfigError("classify_aspect: empty text or aspect");
  }
}

std::vector<LabelDistribution> ClassifierSession::classify_batch(
    std::span<const std::string> texts) {
  std::vector<ClassifierInput> inputs;
  inputs.reserve(texts.size());
  for (const auto& t : texts) inputs.push_back({t, {}});
  return classify_batch(inputs);
}

std::vector<std::vector<double>> ClassifierSession::predict_chunk(
    std::span<const ClassifierInput> chunk, std::span<const std::size_t> origin) {
  std::unique_lock<std::mutex> lock(serial_, std::defer_lock);
  if (!classifier_->concurrent_safe()) lock.lock();
  try {
    auto out = classifier_->predict(chunk);
    if (out.size() != chunk.size()) {
      throw ModelError(ModelError::Kind::kInference,
                       spec().model_id + " returned the wrong number of results");
    }
    return out;
  } catch (const ModelError& e) {
    throw ModelError(e.kind(), "item " + std::to_string(origin[0]) + ": " + e.what());
  } catch (const std::exception& batch_error) {
    // Find the failing element so the caller can report its index.
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      try {
        classifier_->predict(chunk.subspan(i, 1));
      } catch (const std::exception& e) {
        throw BatchItemError(origin[i], e.what());
      }
    }
    throw BatchItemError(origin[0], batch_error.what());
  }
}

std::vector<LabelDistribution> ClassifierSession::classify_batch(
    std::span<const ClassifierInput> inputs) {
  const ModelSpec& model = spec();
  const bool aspect_task = model.task == Task::kAspectSentiment;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (trim(inputs[i].text).empty()) throw BatchItemError(i, "empty text");
    if (aspect_task && trim(inputs[i].aspect).empty()) {
      throw BatchItemError(i, "empty aspect");
    }
  }

  struct Pending {
    CacheKey key;
    std::string address;
    Truncated window;
    std::optional<CachedScores> scores;
  };
  std::vector<Pending> pending;
  pending.reserve(inputs.size());
  for (const auto& in : inputs) {
    Pending p;
    p.key = CacheKey{model.model_id, model.revision_pin, model.task,
                     sha256_hex(in.text),
                     aspect_task ? sha256_hex(in.aspect) : std::string()};
    p.address = p.key.digest();
    p.window = truncate_units(in.text, model.max_input_units);
    if (cache_) p.scores = cache_->lookup(p.key);
    pending.push_back(std::move(p));
  }

  // Unique misses, in first-seen order.
  std::vector<std::size_t> misses;
  std::unordered_map<std::string, std::size_t> first_of;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (pending[i].scores) continue;
    if (first_of.try_emplace(pending[i].address, i).second) misses.push_back(i);
  }
  for (std::size_t begin = 0; begin < misses.size(); begin += batch_size_) {
    const std::size_t end = std::min(misses.size(), begin + batch_size_);
    std::vector<ClassifierInput> chunk;
    for (std::size_t m = begin; m < end; ++m) {
      chunk.push_back({pending[misses[m]].window.text, inputs[misses[m]].aspect});
    }
    auto out = predict_chunk(
        chunk, std::span<const std::size_t>(misses).subspan(begin, end - begin));
    for (std::size_t m = begin; m < end; ++m) {
      Pending& p = pending[misses[m]];
      p.scores = CachedScores{std::move(out[m - begin]), p.window.truncated};
      if (cache_) cache_->insert(p.key, model, *p.scores);
    }
  }

  std::vector<LabelDistribution> result;
  result.reserve(inputs.size());
  for (auto& p : pending) {
    if (!p.scores) p.scores = pending[first_of.at(p.address)].scores;
    result.push_back(make_distribution(model, p.scores->probabilities,
                                       p.key.text_digest, p.scores->truncated));
  }
  return result;
}

}  // namespace xabsa::inference
