// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Resolution of model identifiers to classifier adapters.

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "xabsa/classifier.hpp"

namespace xabsa::inference {

/// Builtin deterministic models; their revision is kSyntheticRevision.
inline constexpr std::string_view kSyntheticConstant = "synthetic/constant";
inline constexpr std::string_view kSyntheticLexicon = "synthetic/lexicon";
inline constexpr std::string_view kSyntheticRevision = "builtin-1";

/// Environment variable naming a model server for non-synthetic ids.
inline constexpr std::string_view kModelEndpointEnv = "XABSA_MODEL_ENDPOINT";

struct ModelConfig {
  std::string model_id;
  std::string revision_pin;  // empty accepts whatever revision is served
  std::string endpoint;      // base URL of a model server, may be empty
  std::filesystem::path lexicon_file;  // optional override for synthetic/lexicon
};

/// Throws ModelError: kMissingArtifact for unknown ids or unreachable
/// servers, kVersionMismatch when the served revision differs from the pin.
std::shared_ptr<Classifier> resolve_model(const ModelConfig& config, Task task);

/// Reads {"bias": [...], "weights": {"word": [...]}} with one value per label.
Lexicon load_lexicon(const std::filesystem::path& path, std::size_t label_count);

/// Adapter for a model server speaking a small JSON protocol:
///   GET  {endpoint}/models/{id}  -> {"revision", "labels", "mask_token", "max_input_units"}
///   POST {endpoint}/classify     {"model", "inputs": [{"text", "text_pair"}]}
///                                -> {"outputs": [[{"label", "score"}, ...], ...]}
class HttpClassifier : public Classifier {
 public:
  HttpClassifier(std::string endpoint, std::string model_id, Task task,
                 std::string revision_pin);

  const ModelSpec& spec() const override { return spec_; }
  std::vector<std::vector<double>> predict(
      std::span<const ClassifierInput> inputs) override;
  bool concurrent_safe() const override { return false; }
  std::optional<std::string> mask_token() const override { return mask_token_; }

 private:
  std::string endpoint_;
  ModelSpec spec_;
  std::optional<std::string> mask_token_;
};

}  // namespace xabsa::inference
