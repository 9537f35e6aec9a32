// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Span-level explanations of classifier scores.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/corpus.hpp"
#include "xabsa/session.hpp"
#include "xabsa/shapley.hpp"
#include "xabsa/text.hpp"

namespace xabsa::explain {

enum class Unit { kWord, kSentence };

std::string_view to_string(Unit u);

struct FeatureSegmentation {
  Unit unit = Unit::kWord;
  std::vector<Span> spans;
};

/// Word tokens (letters, digits, non-ASCII bytes, and apostrophes or hyphens
/// between them) and runs of other punctuation, within `range` of `text`.
FeatureSegmentation word_segmentation(std::string_view text,
                                      std::optional<Span> range = std::nullopt);

/// Spans from corpus::segment_sentences.
FeatureSegmentation sentence_segmentation(std::string_view text);

/// Spans must be ordered, non-empty, non-overlapping and inside the text.
std::optional<std::string> check_spans(std::span<const Span> spans,
                                       std::string_view text);

/// True when every non-whitespace byte of `text` lies in some span.
bool covers_content(std::span<const Span> spans, std::string_view text);

inline constexpr std::string_view kFallbackPlaceholder = "...";

/// Replaces every span not in `active` by `placeholder`; everything else,
/// including the text between spans, is kept verbatim.
std::string mask_apply(std::string_view text, const FeatureSegmentation& seg,
                       const Coalition& active, std::string_view placeholder);

/// Index-set form of mask_apply.
std::string mask_apply(std::string_view text, const FeatureSegmentation& seg,
                       std::span<const std::size_t> active,
                       std::string_view placeholder);

/// v(S) = score of `target_label` for the text with spans outside S masked.
/// Masked variants are scored through the session in one batch per call.
class ClassifierValueFunction : public ValueFunction {
 public:
  ClassifierValueFunction(inference::ClassifierSession& session, std::string text,
                          FeatureSegmentation segmentation, std::string target_label,
                          std::string placeholder, std::string aspect = {});

  std::size_t size() const override { return segmentation_.spans.size(); }
  std::vector<double> evaluate(std::span<const Coalition> coalitions) const override;

 private:
  inference::ClassifierSession& session_;
  std::string text_;
  FeatureSegmentation segmentation_;
  std::string target_label_;
  std::string placeholder_;
  std::string aspect_;
};

/// Placeholder for a session: its mask token, else kFallbackPlaceholder.
std::string default_placeholder(const inference::ClassifierSession& session);

struct SpanValue {
  Span span;
  Unit unit = Unit::kWord;
  double phi = 0.0;
  double std_error = 0.0;
};

/// Shapley explanation of one target label over the spans of one text.
struct Attribution {
  std::string doc_id;
  std::string target_label;
  std::string model_id;
  double base_value = 0.0;
  double full_value = 0.0;
  std::vector<SpanValue> values;  // ordered by position
  Estimator estimator = Estimator::kExact;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  double phi_sum() const;
};

/// Attaches spans to estimator output.
Attribution make_attribution(const FeatureSegmentation& seg, const ShapleyValues& values);

using ValueBuilder =
    std::function<std::unique_ptr<ValueFunction>(const FeatureSegmentation&)>;

struct HierarchicalParams {
  std::size_t top_k = 3;
  std::size_t exact_limit = kDefaultExactLimit;
  std::size_t sentence_samples = 2000;
  std::size_t word_samples = 2000;
  std::uint64_t seed = 0;
};

/// Stage 1 explains sentences (exact up to exact_limit, permutation beyond).
/// Stage 2 explains the words of the top_k sentences by |phi| with every
/// other sentence left intact, then rescales those word values to sum to the
/// sentence's stage-1 value: proportionally when the raw sum has the same
/// sign, otherwise by spreading the residual evenly. Unrefined sentences keep
/// their sentence span. A one-sentence document is explained at word level
/// directly.
Attribution shapley_hierarchical(const ValueBuilder& build,
                                 const corpus::AbstractDocument& doc,
                                 std::string target_label,
                                 const HierarchicalParams& params);

/// One JSON object per (document, target label).
std::string attribution_to_json(const Attribution& a);
Attribution attribution_from_json(std::string_view json_text);

}  // namespace xabsa::explain
