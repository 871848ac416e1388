#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newsflow::io {

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Shortest representation that parses back to the same double; NaN prints as "".
std::string format_double(double value);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// A CSV file with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row, for error messages.
  std::vector<std::size_t> line_numbers;

  /// Index of a header column; throws Error(missing_field) when absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// 64-bit FNV-1a, used for run-manifest checksums.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t value);

} // namespace newsflow::io
