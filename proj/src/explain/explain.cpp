// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "xabsa/error.hpp"

namespace xabsa::explain {
namespace {

using nlohmann::json;

bool is_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

std::uint64_t sentence_seed(std::uint64_t seed, std::size_t sentence) {
  // splitmix64 finalizer over (seed, sentence index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (sentence + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ShapleyValues estimate(const ValueFunction& v, std::size_t exact_limit,
                       std::size_t samples, std::uint64_t seed) {
  if (v.size() <= exact_limit) return shapley_exact(v, exact_limit);
  return shapley_permutation(v, samples, seed);
}

void rescale(std::vector<double>& phi, std::vector<double>& std_error,
             double target) {
  if (phi.empty()) return;
  const double raw = std::accumulate(phi.begin(), phi.end(), 0.0);
  if (std::abs(raw) > 1e-12 && (raw > 0) == (target > 0) && target != 0.0) {
    const double factor = target / raw;
    for (double& p : phi) p *= factor;
    for (double& s : std_error) s *= std::abs(factor);
  } else {
    const double shift = (target - raw) / static_cast<double>(phi.size());
    for (double& p : phi) p += shift;
  }
}

Unit parse_unit(const std::string& s) {
  if (s == "word") return Unit::kWord;
  if (s == "sentence") return Unit::kSentence;
  throw DataError("unknown span unit '" + s + "'");
}

Estimator parse_estimator(const std::string& s) {
  if (s == "exact") return Estimator::kExact;
  if (s == "permutation") return Estimator::kPermutation;
  if (s == "hierarchical") return Estimator::kHierarchical;
  throw DataError("unknown estimator '" + s + "'");
}

}  // namespace

std::string_view to_string(Unit u) {
  return u == Unit::kWord ? "word" : "sentence";
}

FeatureSegmentation word_segmentation(std::string_view text,
                                      std::optional<Span> range) {
  const Span r = range.value_or(Span{0, text.size()});
  if (r.begin > r.end || r.end > text.size()) {
    throw ConfigError("word_segmentation: range outside text");
  }
  FeatureSegmentation seg{Unit::kWord, {}};
  std::size_t i = r.begin;
  while (i < r.end) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (is_word_byte(text[i])) {
      while (j < r.end) {
        if (is_word_byte(text[j])) {
          ++j;
        } else if ((text[j] == '\'' || text[j] == '-') && j + 1 < r.end &&
                   is_word_byte(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
    } else {
      while (j < r.end && !is_space(text[j]) && !is_word_byte(text[j])) ++j;
    }
    seg.spans.push_back({i, j});
    i = j;
  }
  return seg;
}

FeatureSegmentation sentence_segmentation(std::string_view text) {
  return {Unit::kSentence, corpus::segment_sentences(text)};
}

std::optional<std::string> check_spans(std::span<const Span> spans,
                                       std::string_view text) {
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    if (s.begin >= s.end) return "span " + std::to_string(i) + " is empty";
    if (s.end > text.size()) return "span " + std::to_string(i) + " ends past the text";
    if (s.begin < previous_end) {
      return "span " + std::to_string(i) + " overlaps or precedes its predecessor";
    }
    previous_end = s.end;
  }
  return std::nullopt;
}

bool covers_content(std::span<const Span> spans, std::string_view text) {
  std::size_t pos = 0;
  for (const Span& s : spans) {
    for (; pos < s.begin; ++pos) {
      if (!is_space(text[pos])) return false;
    }
    pos = std::max(pos, s.end);
  }
  for (; pos < text.size(); ++pos) {
    if (!is_space(text[pos])) return false;
  }
  return true;
}

std::string mask_apply(std::string_view text, const FeatureSegmentation& seg,
                       const Coalition& active, std::string_view placeholder) {
  if (active.size() != seg.spans.size()) {
    throw ConfigError("mask_apply: coalition size does not match segmentation");
  }
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < seg.spans.size(); ++i) {
    const Span& s = seg.spans[i];
    out.append(text.substr(pos, s.begin - pos));
    if (active[i]) {
      out.append(s.of(text));
    } else {
      out.append(placeholder);
    }
    pos = s.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::string mask_apply(std::string_view text, const FeatureSegmentation& seg,
                       std::span<const std::size_t> active,
                       std::string_view placeholder) {
  Coalition c(seg.spans.size(), false);
  for (std::size_t i : active) {
    if (i >= c.size()) throw ConfigError("mask_apply: span index out of range");
    c[i] = true;
  }
  return mask_apply(text, seg, c, placeholder);
}

ClassifierValueFunction::ClassifierValueFunction(
    inference::ClassifierSession& session, std::string text,
    FeatureSegmentation segmentation, std::string target_label,
    std::string placeholder, std::string aspect)
    : session_(session),
      text_(std::move(text)),
      segmentation_(std::move(segmentation)),
      target_label_(std::move(target_label)),
      placeholder_(std::move(placeholder)),
      aspect_(std::move(aspect)) {
  const auto& labels = session_.spec().label_set;
  if (std::find(labels.begin(), labels.end(), target_label_) == labels.end()) {
    throw ConfigError("target label '" + target_label_ + "' is not produced by " +
                      session_.spec().model_id);
  }
  if (auto problem = check_spans(segmentation_.spans, text_)) {
    throw ConfigError("segmentation does not fit the text: " + *problem);
  }
}

std::vector<double> ClassifierValueFunction::evaluate(
    std::span<const Coalition> coalitions) const {
  std::vector<std::string> texts;
  texts.reserve(coalitions.size());
  for (const auto& c : coalitions) {
    texts.push_back(mask_apply(text_, segmentation_, c, placeholder_));
  }
  std::vector<inference::ClassifierInput> inputs;
  inputs.reserve(texts.size());
  for (const auto& t : texts) inputs.push_back({t, aspect_});
  const auto dists = session_.classify_batch(inputs);
  std::vector<double> out;
  out.reserve(dists.size());
  for (const auto& d : dists) out.push_back(d.score(target_label_));
  return out;
}

std::string default_placeholder(const inference::ClassifierSession& session) {
  return session.mask_token().value_or(std::string(kFallbackPlaceholder));
}

double Attribution::phi_sum() const {
  double total = 0.0;
  for (const auto& v : values) total += v.phi;
  return total;
}

Attribution make_attribution(const FeatureSegmentation& seg,
                             const ShapleyValues& values) {
  if (seg.spans.size() != values.phi.size()) {
    throw ConfigError("attribution: segmentation and values differ in length");
  }
  Attribution a;
  a.base_value = values.base_value;
  a.full_value = values.full_value;
  a.estimator = values.estimator;
  a.sample_count = values.sample_count;
  a.seed = values.seed;
  a.values.reserve(seg.spans.size());
  for (std::size_t i = 0; i < seg.spans.size(); ++i) {
    a.values.push_back({seg.spans[i], seg.unit, values.phi[i], values.std_error[i]});
  }
  return a;
}

Attribution shapley_hierarchical(const ValueBuilder& build,
                                 const corpus::AbstractDocument& doc,
                                 std::string target_label,
                                 const HierarchicalParams& params) {
  if (doc.sentences.empty()) {
    throw ConfigError("hierarchical explanation needs at least one sentence");
  }
  Attribution result;
  result.doc_id = doc.source_id;
  result.target_label = std::move(target_label);
  result.estimator = Estimator::kHierarchical;
  result.seed = params.seed;

  if (doc.sentences.size() == 1) {
    const auto words = word_segmentation(doc.text, doc.sentences.front());
    const auto v = build(words);
    const auto values =
        estimate(*v, params.exact_limit, params.word_samples, params.seed);
    Attribution a = make_attribution(words, values);
    a.doc_id = result.doc_id;
    a.target_label = result.target_label;
    a.estimator = Estimator::kHierarchical;
    a.seed = params.seed;
    return a;
  }

  const FeatureSegmentation sentences{Unit::kSentence, doc.sentences};
  const auto v1 = build(sentences);
  const auto stage1 =
      estimate(*v1, params.exact_limit, params.sentence_samples, params.seed);
  result.base_value = stage1.base_value;
  result.full_value = stage1.full_value;
  result.sample_count = stage1.sample_count;

  std::vector<std::size_t> order(doc.sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(stage1.phi[a]) > std::abs(stage1.phi[b]);
  });
  std::vector<bool> refine(doc.sentences.size(), false);
  for (std::size_t r = 0; r < std::min(params.top_k, order.size()); ++r) {
    refine[order[r]] = true;
  }

  for (std::size_t j = 0; j < doc.sentences.size(); ++j) {
    if (!refine[j]) {
      result.values.push_back(
          {doc.sentences[j], Unit::kSentence, stage1.phi[j], stage1.std_error[j]});
      continue;
    }
    const auto words = word_segmentation(doc.text, doc.sentences[j]);
    const auto v2 = build(words);
    auto stage2 = estimate(*v2, params.exact_limit, params.word_samples,
                           sentence_seed(params.seed, j));
    rescale(stage2.phi, stage2.std_error, stage1.phi[j]);
    for (std::size_t w = 0; w < words.spans.size(); ++w) {
      result.values.push_back(
          {words.spans[w], Unit::kWord, stage2.phi[w], stage2.std_error[w]});
    }
  }
  return result;
}

std::string attribution_to_json(const Attribution& a) {
  json spans = json::array();
  for (const auto& v : a.values) {
    spans.push_back({{"start", v.span.begin},
                     {"end", v.span.end},
                     {"unit", to_string(v.unit)},
                     {"phi", v.phi},
                     {"stderr", v.std_error}});
  }
  json j = {{"doc_id", a.doc_id},
            {"target_label", a.target_label},
            {"model_id", a.model_id},
            {"estimator", to_string(a.estimator)},
            {"seed", a.seed},
            {"sample_count", a.sample_count},
            {"base_value", a.base_value},
            {"full_value", a.full_value},
            {"spans", spans}};
  return j.dump();
}

Attribution attribution_from_json(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("attribution is not a JSON object");
  Attribution a;
  try {
    a.doc_id = j.at("doc_id").get<std::string>();
    a.target_label = j.at("target_label").get<std::string>();
    a.model_id = j.at("model_id").get<std::string>();
    a.estimator = parse_estimator(j.at("estimator").get<std::string>());
    a.seed = j.at("seed").get<std::uint64_t>();
    a.sample_count = j.at("sample_count").get<std::size_t>();
    a.base_value = j.at("base_value").get<double>();
    a.full_value = j.at("full_value").get<double>();
    for (const auto& s : j.at("spans")) {
      a.values.push_back({{s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>()},
                          parse_unit(s.at("unit").get<std::string>()),
                          s.at("phi").get<double>(),
                          s.at("stderr").get<double>()});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed attribution: ") + e.what());
  }
  return a;
}

}  // namespace xabsa::explain
