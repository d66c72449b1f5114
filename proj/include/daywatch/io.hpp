// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace daywatch::io {

std::string read_file(const std::string& path);

/// Writes to `<path>.tmp` then renames over `path`, so a reader never sees a
/// partially written file.
void write_file_atomic(const std::string& path, std::string_view contents);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Splits into lines, accepting both `\n` and `\r\n`.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace daywatch::io
