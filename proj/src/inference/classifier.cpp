// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/classifier.hpp"

#include "xabsa/corpus.hpp"
#include "xabsa/error.hpp"
#include "xabsa/text.hpp"

namespace xabsa::inference {
namespace {

bool is_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

// Sentences of `text` that mention `aspect`, joined; the whole text if none.
std::string aspect_context(std::string_view text, std::string_view aspect) {
  const std::string needle = to_lower(trim(aspect));
  std::string context;
  for (const Span& s : corpus::segment_sentences(text)) {
    const auto sentence = s.of(text);
    if (to_lower(sentence).find(needle) == std::string::npos) continue;
    if (!context.empty()) context.push_back(' ');
    context.append(sentence);
  }
  return context.empty() ? std::string(text) : context;
}

}  // namespace

std::vector<std::string> lexicon_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_byte(text[j])) ++j;
    tokens.push_back(to_lower(text.substr(i, j - i)));
    i = j;
  }
  return tokens;
}

ConstantClassifier::ConstantClassifier(ModelSpec spec, std::vector<double> logits)
    : spec_(std::move(spec)), probabilities_(softmax(logits)) {
  if (logits.size() != spec_.label_set.size()) {
    throw ConfigError("constant classifier needs one logit per label");
  }
}

std::vector<std::vector<double>> ConstantClassifier::predict(
    std::span<const ClassifierInput> inputs) {
  return std::vector<std::vector<double>>(inputs.size(), probabilities_);
}

const std::map<std::string, double, std::less<>>& builtin_polarity_words() {
  static const std::map<std::string, double, std::less<>> words = {
      {"abuse", -1.5},      {"accept", 0.5},        {"accurate", 1.0},
      {"advantage", 1.5},   {"advantages", 1.5},    {"bad", -1.5},
      {"benefit", 1.0},     {"benefits", 1.0},      {"best", 1.5},
      {"better", 1.0},      {"bias", -1.0},         {"biased", -1.0},
      {"capable", 1.0},     {"challenge", -0.75},   {"challenges", -0.75},
      {"concern", -1.0},    {"concerns", -1.0},     {"difficult", -1.0},
      {"effective", 1.0},   {"efficient", 1.0},     {"embrace", 1.0},
      {"empower", 1.0},     {"enhance", 1.0},       {"enhanced", 1.0},
      {"error", -1.0},      {"errors", -1.0},       {"excellent", 2.0},
      {"fail", -1.5},       {"failed", -1.5},       {"fails", -1.5},
      {"failure", -1.5},    {"failures", -1.5},     {"falls", -0.5},
      {"good", 1.5},        {"great", 1.5},         {"hallucination", -1.5},
      {"hallucinations", -1.5}, {"harm", -1.5},     {"harmful", -1.5},
      {"helpful", 1.0},     {"impressive", 1.5},    {"improve", 1.0},
      {"improved", 1.0},    {"improves", 1.0},      {"inaccurate", -1.5},
      {"incorrect", -1.5},  {"innovative", 1.0},    {"issues", -0.5},
      {"lack", -1.0},       {"lacks", -1.0},        {"limitation", -1.0},
      {"limitations", -1.0}, {"limited", -1.0},     {"misuse", -1.5},
      {"negative", -1.5},   {"novel", 0.5},         {"opportunities", 1.0},
      {"outperforms", 1.5}, {"poor", -1.5},         {"positive", 1.5},
      {"potential", 1.0},   {"powerful", 1.5},      {"problem", -1.0},
      {"problems", -1.0},   {"promising", 1.5},     {"reliable", 1.0},
      {"remarkable", 1.5},  {"revolution", 1.0},    {"risk", -1.0},
      {"risks", -1.0},      {"robust", 1.0},        {"short", -0.5},
      {"significant", 1.0}, {"strong", 1.0},        {"success", 1.5},
      {"successful", 1.5},  {"superior", 1.5},      {"threat", -1.5},
      {"unreliable", -1.5}, {"useful", 1.0},        {"valuable", 1.0},
      {"weak", -1.0},       {"worse", -1.5},        {"worst", -2.0},
  };
  return words;
}

Lexicon builtin_overall_lexicon() {
  Lexicon lex;
  lex.bias = {-0.5, 0.0, 0.5, 0.5, -0.5};
  for (const auto& [word, strength] : builtin_polarity_words()) {
    std::vector<double> w(5);
    for (int k = 1; k <= 5; ++k) w[k - 1] = strength * (k - 3) / 2.0;
    lex.weights.emplace(word, std::move(w));
  }
  return lex;
}

Lexicon builtin_aspect_lexicon() {
  Lexicon lex;
  lex.bias = {0.0, 0.3, 0.0};
  for (const auto& [word, strength] : builtin_polarity_words()) {
    lex.weights.emplace(word, std::vector<double>{-strength, 0.0, strength});
  }
  return lex;
}

LexiconClassifier::LexiconClassifier(ModelSpec spec, Lexicon lexicon,
                                     std::string mask_token)
    : spec_(std::move(spec)),
      lexicon_(std::move(lexicon)),
      mask_token_(std::move(mask_token)) {
  const std::size_t n = spec_.label_set.size();
  if (lexicon_.bias.empty()) lexicon_.bias.assign(n, 0.0);
  if (lexicon_.bias.size() != n) {
    throw ConfigError("lexicon bias needs one value per label");
  }
  for (const auto& [word, w] : lexicon_.weights) {
    if (w.size() != n) {
      throw ConfigError("lexicon entry '" + word + "' needs one weight per label");
    }
  }
}

std::vector<double> LexiconClassifier::logits(std::string_view text,
                                              std::string_view aspect) const {
  std::vector<double> out = lexicon_.bias;
  const std::string context = spec_.task == Task::kAspectSentiment
                                  ? aspect_context(text, aspect)
                                  : std::string(text);
  for (const auto& token : lexicon_tokens(context)) {
    const auto it = lexicon_.weights.find(token);
    if (it == lexicon_.weights.end()) continue;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += it->second[k];
  }
  return out;
}

std::vector<std::vector<double>> LexiconClassifier::predict(
    std::span<const ClassifierInput> inputs) {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(softmax(logits(in.text, in.aspect)));
  return out;
}

}  // namespace xabsa::inference
