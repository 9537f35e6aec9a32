// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace xabsa {

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

/// Inclusive calendar-date interval.
struct DateWindow {
  Date first;
  Date last;

  bool contains(const Date& d) const { return first <= d && d <= last; }
};

/// Parses "YYYY-MM-DD"; nullopt on anything else or an invalid date.
std::optional<Date> parse_date(std::string_view s);

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (fractional seconds and numeric offsets are
/// accepted and folded into UTC).
std::optional<Timestamp> parse_timestamp(std::string_view s);

std::string format_date(const Date& d);
std::string format_timestamp(const Timestamp& t);

Timestamp now_seconds();

}  // namespace xabsa
