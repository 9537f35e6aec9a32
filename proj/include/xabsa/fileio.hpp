// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace xabsa {

/// Writes through a sibling temp file and renames it into place, creating
/// parent directories as needed. Throws Error naming the path on failure.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

/// Reads a whole file. Throws DataError naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace xabsa
