// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xabsa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or caller-supplied arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Network failure that survived the retry budget.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A classifier could not be resolved or loaded.
class ModelError : public Error {
 public:
  enum class Kind { kMissingArtifact, kVersionMismatch, kInference };

  ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Malformed or missing data files, optionally pinned to a line.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Failure of one element of a batched call.
class BatchItemError : public Error {
 public:
  BatchItemError(std::size_t index, const std::string& what)
      : Error("item " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace xabsa
