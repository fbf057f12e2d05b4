#pragma once

#include <string>

namespace chdbc {

// Formats with 17 significant digits, enough for exact double round-trips.
std::string format_g17(double v);

// Writes content to a sibling temp file and renames it over path, so readers
// never observe a partially written file.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace chdbc
