#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tokensched::csv {

/// One parsed data row with its 1-based line number in the source.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Table read from a comma-separated stream. Blank lines and lines starting
/// with '#' are skipped. No quoting support: fields never contain commas.
struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Column index of `name`; throws an input error when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

Table read(std::istream& in, std::string_view source_name);
Table read_file(const std::string& path);

double parse_double(std::string_view field, std::string_view source, std::size_t line);
std::int64_t parse_int(std::string_view field, std::string_view source, std::size_t line);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace tokensched::csv
