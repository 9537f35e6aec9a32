// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "xabsa/error.hpp"

namespace xabsa::inference {
namespace {

std::size_t declared_index(const LabelDistribution& dist, std::string_view label) {
  const auto it = std::find(dist.label_set.begin(), dist.label_set.end(), label);
  return it == dist.label_set.end()
             ? std::numeric_limits<std::size_t>::max()
             : static_cast<std::size_t>(it - dist.label_set.begin());
}

}  // namespace

std::string_view to_string(Task task) {
  return task == Task::kOverallSentiment ? "overall_sentiment" : "aspect_sentiment";
}

std::optional<Task> parse_task(std::string_view s) {
  if (s == "overall_sentiment") return Task::kOverallSentiment;
  if (s == "aspect_sentiment") return Task::kAspectSentiment;
  return std::nullopt;
}

const std::vector<std::string>& star_labels() {
  static const std::vector<std::string> labels = {"1 star", "2 stars", "3 stars",
                                                  "4 stars", "5 stars"};
  return labels;
}

const std::vector<std::string>& polarity_labels() {
  static const std::vector<std::string> labels = {"Negative", "Neutral", "Positive"};
  return labels;
}

ModelSpec make_spec(std::string model_id, Task task, std::string revision_pin,
                    std::size_t max_input_units) {
  ModelSpec spec;
  spec.model_id = std::move(model_id);
  spec.task = task;
  spec.label_set =
      task == Task::kOverallSentiment ? star_labels() : polarity_labels();
  spec.max_input_units = max_input_units;
  spec.revision_pin = std::move(revision_pin);
  return spec;
}

double LabelDistribution::score(std::string_view label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e.score;
  }
  throw ConfigError("label '" + std::string(label) + "' not in distribution");
}

LabelDistribution make_distribution(const ModelSpec& spec,
                                    std::span<const double> probabilities,
                                    std::string text_hash, bool truncated) {
  if (probabilities.size() != spec.label_set.size()) {
    throw ModelError(ModelError::Kind::kInference,
                     spec.model_id + " returned " +
                         std::to_string(probabilities.size()) + " scores for " +
                         std::to_string(spec.label_set.size()) + " labels");
  }
  LabelDistribution dist;
  dist.label_set = spec.label_set;
  dist.model_id = spec.model_id;
  dist.target_text_hash = std::move(text_hash);
  dist.truncated = truncated;
  dist.entries.reserve(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    dist.entries.push_back({spec.label_set[i], probabilities[i]});
  }
  std::stable_sort(dist.entries.begin(), dist.entries.end(),
                   [](const LabelScore& a, const LabelScore& b) {
                     return a.score > b.score;
                   });
  return dist;
}

std::optional<std::string> check_distribution(const LabelDistribution& dist,
                                              double tolerance) {
  if (dist.entries.size() != dist.label_set.size()) {
    return "distribution has " + std::to_string(dist.entries.size()) +
           " entries for " + std::to_string(dist.label_set.size()) + " labels";
  }
  std::set<std::string_view> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < dist.entries.size(); ++i) {
    const auto& e = dist.entries[i];
    if (declared_index(dist, e.label) == std::numeric_limits<std::size_t>::max()) {
      return "undeclared label '" + e.label + "'";
    }
    if (!seen.insert(e.label).second) return "duplicate label '" + e.label + "'";
    if (!(e.score >= 0.0 && e.score <= 1.0)) {
      return "score of '" + e.label + "' outside [0, 1]";
    }
    if (i > 0) {
      const auto& prev = dist.entries[i - 1];
      if (prev.score < e.score ||
          (prev.score == e.score &&
           declared_index(dist, prev.label) > declared_index(dist, e.label))) {
        return "entries not sorted at position " + std::to_string(i);
      }
    }
    total += e.score;
  }
  if (std::abs(total - 1.0) > tolerance) {
    return "scores sum to " + std::to_string(total);
  }
  return std::nullopt;
}

double cumulative_probability(const LabelDistribution& dist,
                              std::span<const std::string> labels) {
  const std::set<std::string_view> unique(labels.begin(), labels.end());
  double total = 0.0;
  for (std::string_view label : unique) total += dist.score(label);
  return total;
}

std::string top_label(const LabelDistribution& dist) {
  if (dist.entries.empty()) throw ConfigError("top_label of an empty distribution");
  const LabelScore* best = &dist.entries.front();
  for (const auto& e : dist.entries) {
    if (e.score > best->score ||
        (e.score == best->score &&
         declared_index(dist, e.label) < declared_index(dist, best->label))) {
      best = &e;
    }
  }
  return best->label;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kNegative: return "Negative";
    case Polarity::kNeutral: return "Neutral";
    case Polarity::kPositive: return "Positive";
  }
  return "Neutral";
}

Polarity parse_polarity(std::string_view label) {
  if (label == "Negative") return Polarity::kNegative;
  if (label == "Neutral") return Polarity::kNeutral;
  if (label == "Positive") return Polarity::kPositive;
  throw ConfigError("not a polarity label: '" + std::string(label) + "'");
}

Polarity star_to_polarity(std::string_view star_label) {
  const auto& stars = star_labels();
  const auto it = std::find(stars.begin(), stars.end(), star_label);
  if (it == stars.end()) {
    throw ConfigError("not a star label: '" + std::string(star_label) + "'");
  }
  const auto stars_count = it - stars.begin() + 1;
  if (stars_count <= 2) return Polarity::kNegative;
  if (stars_count == 3) return Polarity::kNeutral;
  return Polarity::kPositive;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

}  // namespace xabsa::inference
