// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "xabsa/error.hpp"

namespace xabsa::explain {
namespace {

// Intensity level in [0, 255].
int level(double phi, double max_abs) {
  return static_cast<int>(std::lround(255.0 * std::abs(phi) / max_abs));
}

std::string ansi_open(double phi, int lvl) {
  const int fade = 255 - lvl;
  char buf[48];
  if (phi > 0) {
    std::snprintf(buf, sizeof buf, "\x1b[48;2;255;%d;%dm", fade, fade);
  } else {
    std::snprintf(buf, sizeof buf, "\x1b[48;2;%d;%d;255m", fade, fade);
  }
  return buf;
}

std::string html_open(const SpanValue& v, int lvl) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<span style=\"background-color: rgba(%s, %.3f)\" title=\"%+.6g\">",
                v.phi > 0 ? "255, 0, 0" : "0, 0, 255", lvl / 255.0, v.phi);
  return buf;
}

}  // namespace

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_heatmap(const Attribution& attribution, std::string_view text,
                           HeatmapFormat format) {
  std::vector<Span> spans;
  spans.reserve(attribution.values.size());
  for (const auto& v : attribution.values) spans.push_back(v.span);
  if (auto problem = check_spans(spans, text)) {
    throw ConfigError("attribution does not align with the text: " + *problem);
  }
  double max_abs = 0.0;
  for (const auto& v : attribution.values) max_abs = std::max(max_abs, std::abs(v.phi));

  const bool html = format == HeatmapFormat::kHtml;
  auto plain = [&](std::string_view s) {
    return html ? html_escape(s) : std::string(s);
  };

  std::string out;
  if (html) {
    out += "<div class=\"xabsa-heatmap\" data-target=\"" +
           html_escape(attribution.target_label) +
           "\" style=\"white-space: pre-wrap; line-height: 1.8\">";
  }
  std::size_t pos = 0;
  for (const auto& v : attribution.values) {
    out += plain(text.substr(pos, v.span.begin - pos));
    const auto piece = v.span.of(text);
    const int lvl = max_abs > 0.0 ? level(v.phi, max_abs) : 0;
    if (v.phi == 0.0 || lvl == 0) {
      out += plain(piece);
    } else if (html) {
      out += html_open(v, lvl) + html_escape(piece) + "</span>";
    } else {
      out += ansi_open(v.phi, lvl) + std::string(piece) + "\x1b[0m";
    }
    pos = v.span.end;
  }
  out += plain(text.substr(pos));
  if (html) out += "</div>\n";
  return out;
}

}  // namespace xabsa::explain
