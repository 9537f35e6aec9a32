// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Label distributions produced by sentiment classifiers and the arithmetic
// done on them.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xabsa::inference {

enum class Task { kOverallSentiment, kAspectSentiment };

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view s);

/// {"1 star", "2 stars", ..., "5 stars"}
const std::vector<std::string>& star_labels();
/// {"Negative", "Neutral", "Positive"}
const std::vector<std::string>& polarity_labels();

struct ModelSpec {
  std::string model_id;
  Task task = Task::kOverallSentiment;
  std::vector<std::string> label_set;  // declared order
  std::size_t max_input_units = 512;
  std::string revision_pin;
};

ModelSpec make_spec(std::string model_id, Task task, std::string revision_pin,
                    std::size_t max_input_units = 512);

inline constexpr std::string_view kDefaultOverallModel =
    "nlptown/bert-base-multilingual-uncased-sentiment";
inline constexpr std::string_view kDefaultAspectModel =
    "yangheng/deberta-v3-base-absa-v1.1";

struct LabelScore {
  std::string label;
  double score = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

/// Classifier output. `entries` is normally sorted by score descending (ties
/// in declared order); consumers must not rely on storage order for argmax.
struct LabelDistribution {
  std::vector<LabelScore> entries;
  std::vector<std::string> label_set;  // declared order of the model
  std::string model_id;
  std::string target_text_hash;
  bool truncated = false;

  /// Score of `label`; throws ConfigError when absent.
  double score(std::string_view label) const;

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;
};

/// Builds a sorted distribution from probabilities aligned with the spec's
/// label set.
LabelDistribution make_distribution(const ModelSpec& spec,
                                    std::span<const double> probabilities,
                                    std::string text_hash, bool truncated = false);

/// First violated invariant (sum, completeness, order), if any.
std::optional<std::string> check_distribution(const LabelDistribution& dist,
                                              double tolerance = 1e-4);

/// Sum of the scores of `labels` (duplicates counted once). Throws ConfigError
/// on a label outside the distribution.
double cumulative_probability(const LabelDistribution& dist,
                              std::span<const std::string> labels);

/// Argmax; exact ties go to the label declared first.
std::string top_label(const LabelDistribution& dist);

enum class Polarity { kNegative, kNeutral, kPositive };

std::string_view to_string(Polarity p);
/// Parses "Negative" / "Neutral" / "Positive". Throws ConfigError otherwise.
Polarity parse_polarity(std::string_view label);

/// {1,2} stars -> Negative, 3 -> Neutral, {4,5} -> Positive.
Polarity star_to_polarity(std::string_view star_label);

std::vector<double> softmax(std::span<const double> logits);

}  // namespace xabsa::inference
