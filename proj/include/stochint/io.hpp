#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stochint::io {

enum class OutputFormat { kCsv, kJson };

std::string to_string(OutputFormat f);

// Accepts "csv" or "json"; throws std::invalid_argument otherwise.
OutputFormat format_from_string(std::string_view name);

// Full-precision decimal form (17 significant digits, round-trip safe).
std::string format_double(double x);

// Rectangular cell table; render_csv emits the header then one line per row,
// comma separated with '\n' endings. Cells are written verbatim, so callers
// format numbers themselves (none of our cells need quoting).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& t);

// Write content through a sibling temporary file and rename it into place so
// readers never observe a partial file. Creates missing parent directories.
// Throws std::runtime_error on filesystem errors.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace stochint::io
