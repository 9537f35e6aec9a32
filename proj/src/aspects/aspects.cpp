// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/aspects.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "xabsa/error.hpp"

namespace xabsa::aspects {
namespace {

struct Token {
  Span span;
  double phi = 0.0;
  std::string normalized;
  bool usable = false;  // has a letter and is not a stopword
};

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           static_cast<unsigned char>(c) >= 0x80;
  });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool only_space_between(std::string_view text, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (!is_space(text[i])) return false;
  }
  return true;
}

}  // namespace

std::string normalize_token(std::string_view token) {
  std::string t = to_lower(token);
  if (ends_with(t, "'s")) {
    t.resize(t.size() - 2);
  } else if (ends_with(t, "\xE2\x80\x99s")) {  // right single quote
    t.resize(t.size() - 4);
  }
  if (t.size() > 3 && t.back() == 's' && !ends_with(t, "ss") &&
      !ends_with(t, "us") && !ends_with(t, "is")) {
    t.pop_back();
  }
  return t;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ConfigError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<AspectCandidate> extract_aspects(const corpus::AbstractDocument& doc,
                                             const explain::Attribution& attribution,
                                             const ExtractParams& params) {
  if (!attribution.doc_id.empty() && attribution.doc_id != doc.source_id) {
    throw ConfigError("attribution for '" + attribution.doc_id +
                      "' applied to document '" + doc.source_id + "'");
  }
  std::vector<Span> spans;
  for (const auto& v : attribution.values) spans.push_back(v.span);
  if (auto problem = explain::check_spans(spans, doc.text)) {
    throw ConfigError("attribution misaligned with document: " + *problem);
  }

  std::vector<double> positive;
  for (const auto& v : attribution.values) {
    if (v.phi > 0.0) positive.push_back(v.phi);
  }
  if (positive.empty() || params.max_candidates == 0) return {};
  const double threshold = quantile(positive, params.tau_quantile);

  auto is_stop = [&](std::string_view raw, std::string_view normalized) {
    const auto& stop = stopwords();
    if (stop.contains(raw) || stop.contains(normalized)) return true;
    return std::any_of(params.extra_stopwords.begin(), params.extra_stopwords.end(),
                       [&](const std::string& w) {
                         const auto lw = to_lower(w);
                         return lw == raw || lw == normalized;
                       });
  };

  std::vector<Token> tokens;
  for (const auto& v : attribution.values) {
    if (!(v.phi > 0.0 && v.phi >= threshold)) continue;
    std::vector<Span> words;
    for (const Span& s : explain::word_segmentation(doc.text, v.span).spans) {
      if (has_letter(s.of(doc.text)) || is_ascii_alnum(doc.text[s.begin])) {
        words.push_back(s);
      }
    }
    for (const Span& s : words) {
      Token t;
      t.span = s;
      t.phi = v.phi / static_cast<double>(words.size());
      const std::string raw = to_lower(s.of(doc.text));
      t.normalized = normalize_token(raw);
      t.usable = has_letter(raw) && !is_stop(raw, t.normalized);
      tokens.push_back(std::move(t));
    }
  }

  std::map<std::string, AspectCandidate> merged;
  auto add = [&](std::string term, Span span, double phi, std::size_t weight) {
    auto [it, inserted] = merged.try_emplace(term);
    AspectCandidate& c = it->second;
    if (inserted) {
      c.term = std::move(term);
      c.first_position = span.begin;
    }
    c.first_position = std::min(c.first_position, span.begin);
    c.occurrences.push_back({span, phi});
    c.salience += std::max(phi, 0.0) * static_cast<double>(weight);
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (!t.usable) continue;
    if (t.normalized.size() >= 3) add(t.normalized, t.span, t.phi, 1);
    if (i + 1 < tokens.size()) {
      const Token& u = tokens[i + 1];
      if (u.usable && only_space_between(doc.text, t.span.end, u.span.begin)) {
        add(t.normalized + " " + u.normalized, {t.span.begin, u.span.end},
            (t.phi + u.phi) / 2.0, 2);
      }
    }
  }

  std::vector<AspectCandidate> ranked;
  for (auto& [term, c] : merged) {
    if (c.salience > 0.0) ranked.push_back(std::move(c));
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const AspectCandidate& a, const AspectCandidate& b) {
              if (a.salience != b.salience) return a.salience > b.salience;
              if (a.first_position != b.first_position) {
                return a.first_position < b.first_position;
              }
              return a.term < b.term;
            });
  if (ranked.size() > params.max_candidates) ranked.resize(params.max_candidates);
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
  return ranked;
}

std::vector<AspectSentiment> score_terms(const corpus::AbstractDocument& doc,
                                         std::span<const std::string> terms,
                                         inference::ClassifierSession& session) {
  if (terms.empty()) throw ConfigError("no aspect terms to score");
  std::vector<inference::ClassifierInput> inputs;
  for (const auto& t : terms) inputs.push_back({doc.text, t});
  const auto dists = session.classify_batch(inputs);
  std::vector<AspectSentiment> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    AspectSentiment a;
    a.doc_id = doc.source_id;
    a.term = terms[i];
    a.distribution = dists[i];
    a.polarity = inference::parse_polarity(inference::top_label(dists[i]));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AspectSentiment> score_aspects(const corpus::AbstractDocument& doc,
                                           std::span<const AspectCandidate> candidates,
                                           inference::ClassifierSession& session) {
  if (candidates.empty()) throw ConfigError("no aspect candidates to score");
  std::vector<std::string> terms;
  for (const auto& c : candidates) terms.push_back(c.term);
  auto out = score_terms(doc, terms, session);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].salience = candidates[i].salience;
  return out;
}

std::vector<DivergenceFinding> detect_divergence(
    const inference::LabelDistribution& overall,
    std::span<const AspectSentiment> aspect_results) {
  const std::string star = inference::top_label(overall);
  const auto overall_polarity = inference::star_to_polarity(star);
  std::vector<DivergenceFinding> findings;
  findings.reserve(aspect_results.size());
  for (const auto& a : aspect_results) {
    findings.push_back({a.doc_id, star, overall_polarity, a.term, a.polarity,
                        overall_polarity != a.polarity});
  }
  return findings;
}

std::string aspect_to_json(const AspectSentiment& a) {
  nlohmann::json scores = nlohmann::json::object();
  for (const auto& e : a.distribution.entries) scores[e.label] = e.score;
  nlohmann::json j = {{"doc_id", a.doc_id},
                      {"term", a.term},
                      {"salience", a.salience},
                      {"polarity", inference::to_string(a.polarity)},
                      {"model_id", a.distribution.model_id},
                      {"scores", scores}};
  return j.dump();
}

}  // namespace xabsa::aspects
