#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phonoscope {

/// Minimal RFC-4180-style CSV: comma separated, double-quote quoting with
/// doubled inner quotes, '.' decimal point, UTF-8, mandatory header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, or -1.
  int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, std::string_view what);

std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal form of a double ("1.5", "-5", "0.017").
std::string format_double(double v);

std::string format_u64(std::uint64_t v);

double parse_double_field(std::string_view field, std::string_view what, std::size_t line);
std::uint64_t parse_u64_field(std::string_view field, std::string_view what, std::size_t line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace phonoscope
