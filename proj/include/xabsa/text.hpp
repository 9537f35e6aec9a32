// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace xabsa {

/// Half-open byte range [begin, end) into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  std::string_view of(std::string_view text) const {
    return text.substr(begin, end - begin);
  }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

std::string to_lower(std::string_view s);

/// Trims surrounding whitespace and collapses interior runs to one space.
std::string collapse_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace xabsa
