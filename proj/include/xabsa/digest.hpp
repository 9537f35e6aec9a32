// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <string>
#include <string_view>

namespace xabsa {

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view data);

}  // namespace xabsa
