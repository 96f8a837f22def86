#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace scriptorium::fileio {

/// Whole file as bytes. Throws Error(io).
std::string read_file(const std::filesystem::path& file);

/// Writes through a sibling temp file and renames, so readers never see a
/// half-written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& file, std::string_view content);

}  // namespace scriptorium::fileio
