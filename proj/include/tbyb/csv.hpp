#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tbyb::csv {

// Minimal comma-separated reader: no quoting, surrounding whitespace trimmed,
// blank lines skipped. Sufficient for the numeric files this project exchanges.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; // 1-based source line of each row

  std::optional<std::size_t> column(std::string_view name) const;
};

// Throws ConfigError on rows whose field count differs from the header.
Table read(std::istream& in);

std::vector<std::string> split_line(std::string_view line);

// Strict parses; the whole field must be consumed.
std::optional<double> parse_double(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

// Shortest representation that round-trips.
std::string format_double(double x);

} // namespace tbyb::csv
