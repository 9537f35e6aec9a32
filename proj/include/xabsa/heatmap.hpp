// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <string>
#include <string_view>

#include "xabsa/explain.hpp"

namespace xabsa::explain {

enum class HeatmapFormat { kAnsi, kHtml };

/// Red for phi > 0, blue for phi < 0, with intensity |phi| / max |phi|
/// quantized to 1/255 steps. Zero spans and inter-span text are unstyled.
/// Throws ConfigError when the attribution's spans do not fit `text`.
std::string render_heatmap(const Attribution& attribution, std::string_view text,
                           HeatmapFormat format);

std::string html_escape(std::string_view s);

}  // namespace xabsa::explain
