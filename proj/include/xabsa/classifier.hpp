// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xabsa/inference.hpp"

namespace xabsa::inference {

/// One classifier call. `aspect` is empty for overall sentiment; for aspect
/// sentiment the pair is encoded per the model's sentence-pair convention.
struct ClassifierInput {
  std::string_view text;
  std::string_view aspect;
};

/// A pretrained model treated as an opaque function.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual const ModelSpec& spec() const = 0;

  /// Probabilities per input, aligned with spec().label_set.
  virtual std::vector<std::vector<double>> predict(
      std::span<const ClassifierInput> inputs) = 0;

  virtual bool concurrent_safe() const { return true; }

  virtual std::optional<std::string> mask_token() const { return std::nullopt; }
};

/// softmax(logits) for every input.
class ConstantClassifier : public Classifier {
 public:
  ConstantClassifier(ModelSpec spec, std::vector<double> logits);

  const ModelSpec& spec() const override { return spec_; }
  std::vector<std::vector<double>> predict(
      std::span<const ClassifierInput> inputs) override;

 private:
  ModelSpec spec_;
  std::vector<double> probabilities_;
};

/// Per-word logit contributions, one weight per declared label.
struct Lexicon {
  std::map<std::string, std::vector<double>, std::less<>> weights;
  std::vector<double> bias;
};

/// Word-polarity table shared by the builtin lexicons: word -> strength in
/// [-2, 2] (negative words below zero).
const std::map<std::string, double, std::less<>>& builtin_polarity_words();

/// Star logits: strength * (k - 3) / 2 for k stars, small neutral-leaning bias.
Lexicon builtin_overall_lexicon();
/// Negative/Neutral/Positive logits: -strength, 0, +strength.
Lexicon builtin_aspect_lexicon();

/// Additive lexicon model: logit(label) = bias(label) + sum over lowercased
/// word tokens of weight(word, label), then softmax. For aspect models only
/// the sentences mentioning the aspect are scored (whole text when none do).
class LexiconClassifier : public Classifier {
 public:
  LexiconClassifier(ModelSpec spec, Lexicon lexicon,
                    std::string mask_token = "[MASK]");

  const ModelSpec& spec() const override { return spec_; }
  std::vector<std::vector<double>> predict(
      std::span<const ClassifierInput> inputs) override;
  std::optional<std::string> mask_token() const override { return mask_token_; }

  std::vector<double> logits(std::string_view text, std::string_view aspect) const;

 private:
  ModelSpec spec_;
  Lexicon lexicon_;
  std::string mask_token_;
};

/// Lowercased maximal runs of ASCII letters/digits and non-ASCII bytes.
std::vector<std::string> lexicon_tokens(std::string_view text);

}  // namespace xabsa::inference
