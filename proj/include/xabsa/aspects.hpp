// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Aspect terms from attributions, their sentiment, and overall-vs-aspect
// polarity divergence.

#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/corpus.hpp"
#include "xabsa/explain.hpp"
#include "xabsa/inference.hpp"
#include "xabsa/session.hpp"

namespace xabsa::aspects {

/// Fixed English stopword list.
const std::set<std::string, std::less<>>& stopwords();

/// Lowercase, drop a possessive "'s", then drop one plural "s" from words
/// longer than three letters not ending in "ss", "us" or "is".
std::string normalize_token(std::string_view token);

/// Linear-interpolation quantile (type 7) of a non-empty sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct Occurrence {
  Span span;   // covers the term's tokens in the document text
  double phi;  // mean attributed value of the term's tokens
};

struct AspectCandidate {
  std::string term;
  std::vector<Occurrence> occurrences;
  double salience = 0.0;  // sum of max(phi, 0) * token count over occurrences
  std::size_t rank = 0;   // 1-based
  std::size_t first_position = 0;
};

struct ExtractParams {
  double tau_quantile = 0.75;
  std::size_t max_candidates = 10;
  std::vector<std::string> extra_stopwords;
};

/// 1. keeps spans whose phi is positive and at least the tau_quantile of the
///    positive values; each span's phi is shared evenly by its word tokens;
/// 2. emits unigrams and whitespace-adjacent bigrams of kept, non-stopword
///    tokens (unigrams also need three characters);
/// 3. merges equal normalized terms, summing salience;
/// 4. ranks by salience, then first position, and keeps max_candidates.
/// Throws ConfigError when the attribution does not fit the document.
std::vector<AspectCandidate> extract_aspects(const corpus::AbstractDocument& doc,
                                             const explain::Attribution& attribution,
                                             const ExtractParams& params = {});

struct AspectSentiment {
  std::string doc_id;
  std::string term;
  double salience = 0.0;  // 0 for user-supplied terms
  inference::LabelDistribution distribution;
  inference::Polarity polarity = inference::Polarity::kNeutral;
};

/// One classify_aspect call per candidate, order preserved. Throws
/// ConfigError on an empty list; classifier failures carry the candidate index.
std::vector<AspectSentiment> score_aspects(const corpus::AbstractDocument& doc,
                                           std::span<const AspectCandidate> candidates,
                                           inference::ClassifierSession& session);

/// Same, for user-supplied aspect terms.
std::vector<AspectSentiment> score_terms(const corpus::AbstractDocument& doc,
                                         std::span<const std::string> terms,
                                         inference::ClassifierSession& session);

struct DivergenceFinding {
  std::string doc_id;
  std::string overall_star;
  inference::Polarity overall_polarity = inference::Polarity::kNeutral;
  std::string aspect;
  inference::Polarity aspect_polarity = inference::Polarity::kNeutral;
  bool divergent = false;

  friend bool operator==(const DivergenceFinding&, const DivergenceFinding&) = default;
};

/// One finding per aspect result, in input order.
std::vector<DivergenceFinding> detect_divergence(
    const inference::LabelDistribution& overall,
    std::span<const AspectSentiment> aspect_results);

/// Aspect results file record: doc_id, term, salience, polarity, scores.
std::string aspect_to_json(const AspectSentiment& a);

}  // namespace xabsa::aspects
