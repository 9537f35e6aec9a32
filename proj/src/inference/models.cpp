// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/models.hpp"

#include "httplib.h"
#include "json.hpp"
#include "xabsa/error.hpp"
#include "xabsa/fileio.hpp"

namespace xabsa::inference {
namespace {

using nlohmann::json;

void check_pin(const ModelConfig& config, std::string_view served) {
  if (!config.revision_pin.empty() && config.revision_pin != served) {
    throw ModelError(ModelError::Kind::kVersionMismatch,
                     config.model_id + ": pinned revision '" + config.revision_pin +
                         "' but '" + std::string(served) + "' is available");
  }
}

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("model endpoint needs a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  std::string base = endpoint.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : endpoint.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base, prefix};
}

}  // namespace

Lexicon load_lexicon(const std::filesystem::path& path, std::size_t label_count) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("weights")) {
    throw DataError("lexicon " + path.string() + " is not a lexicon object");
  }
  Lexicon lex;
  try {
    lex.bias = j.value("bias", std::vector<double>(label_count, 0.0));
    for (const auto& [word, w] : j.at("weights").items()) {
      lex.weights.emplace(word, w.get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw DataError("lexicon " + path.string() + ": " + e.what());
  }
  return lex;
}

std::shared_ptr<Classifier> resolve_model(const ModelConfig& config, Task task) {
  if (config.model_id == kSyntheticConstant) {
    check_pin(config, kSyntheticRevision);
    auto spec = make_spec(config.model_id, task, std::string(kSyntheticRevision));
    return std::make_shared<ConstantClassifier>(
        spec, std::vector<double>(spec.label_set.size(), 0.0));
  }
  if (config.model_id == kSyntheticLexicon) {
    check_pin(config, kSyntheticRevision);
    auto spec = make_spec(config.model_id, task, std::string(kSyntheticRevision));
    Lexicon lex;
    if (!config.lexicon_file.empty()) {
      if (!std::filesystem::exists(config.lexicon_file)) {
        throw ModelError(ModelError::Kind::kMissingArtifact,
                         "lexicon file not found: " + config.lexicon_file.string());
      }
      lex = load_lexicon(config.lexicon_file, spec.label_set.size());
    } else {
      lex = task == Task::kOverallSentiment ? builtin_overall_lexicon()
                                            : builtin_aspect_lexicon();
    }
    return std::make_shared<LexiconClassifier>(std::move(spec), std::move(lex));
  }
  if (config.model_id.empty()) {
    throw ModelError(ModelError::Kind::kMissingArtifact, "no model id configured");
  }
  if (config.endpoint.empty()) {
    throw ModelError(ModelError::Kind::kMissingArtifact,
                     "model '" + config.model_id +
                         "' is not builtin and no model endpoint is configured");
  }
  return std::make_shared<HttpClassifier>(config.endpoint, config.model_id, task,
                                          config.revision_pin);
}

HttpClassifier::HttpClassifier(std::string endpoint, std::string model_id,
                               Task task, std::string revision_pin)
    : endpoint_(std::move(endpoint)) {
  const auto [base, prefix] = split_endpoint(endpoint_);
  httplib::Client client(base);
  client.set_connection_timeout(std::chrono::seconds(10));
  auto res = client.Get(prefix + "/models/" + model_id);
  if (!res) {
    throw ModelError(ModelError::Kind::kMissingArtifact,
                     "model server " + endpoint_ + " unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 404) {
    throw ModelError(ModelError::Kind::kMissingArtifact,
                     "model server has no model '" + model_id + "'");
  }
  if (res->status != 200) {
    throw ModelError(ModelError::Kind::kMissingArtifact,
                     "model server returned HTTP " + std::to_string(res->status));
  }
  json info = json::parse(res->body, nullptr, false);
  if (info.is_discarded()) {
    throw ModelError(ModelError::Kind::kMissingArtifact, "bad model info response");
  }
  const std::string served = info.value("revision", "");
  ModelConfig config{model_id, revision_pin, endpoint_, {}};
  check_pin(config, served);
  spec_ = make_spec(model_id, task, served,
                    info.value("max_input_units", std::size_t{512}));
  if (info.contains("labels") &&
      info.at("labels").get<std::vector<std::string>>() != spec_.label_set) {
    throw ModelError(ModelError::Kind::kVersionMismatch,
                     model_id + " serves an unexpected label set");
  }
  if (info.contains("mask_token") && info.at("mask_token").is_string()) {
    mask_token_ = info.at("mask_token").get<std::string>();
  }
}

std::vector<std::vector<double>> HttpClassifier::predict(
    std::span<const ClassifierInput> inputs) {
  const auto [base, prefix] = split_endpoint(endpoint_);
  json body = {{"model", spec_.model_id}, {"inputs", json::array()}};
  for (const auto& in : inputs) {
    json item = {{"text", in.text}};
    if (!in.aspect.empty()) item["text_pair"] = in.aspect;
    body["inputs"].push_back(std::move(item));
  }
  httplib::Client client(base);
  client.set_read_timeout(std::chrono::seconds(300));
  auto res = client.Post(prefix + "/classify", body.dump(), "application/json");
  if (!res || res->status != 200) {
    throw ModelError(ModelError::Kind::kInference,
                     "classification request to " + endpoint_ + " failed");
  }
  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("outputs") ||
      reply.at("outputs").size() != inputs.size()) {
    throw ModelError(ModelError::Kind::kInference, "malformed classification reply");
  }
  std::vector<std::vector<double>> out;
  for (const auto& row : reply.at("outputs")) {
    std::vector<double> probs(spec_.label_set.size(), -1.0);
    for (const auto& e : row) {
      const auto label = e.at("label").get<std::string>();
      const auto it = std::find(spec_.label_set.begin(), spec_.label_set.end(), label);
      if (it == spec_.label_set.end()) {
        throw ModelError(ModelError::Kind::kInference, "unexpected label " + label);
      }
      probs[static_cast<std::size_t>(it - spec_.label_set.begin())] =
          e.at("score").get<double>();
    }
    if (std::find(probs.begin(), probs.end(), -1.0) != probs.end()) {
      throw ModelError(ModelError::Kind::kInference, "reply is missing labels");
    }
    out.push_back(std::move(probs));
  }
  return out;
}

}  // namespace xabsa::inference
