#include "tbyb/table_oracle.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "tbyb/csv.hpp"
#include "tbyb/error.hpp"

namespace tbyb {

CoalitionTable::CoalitionTable(std::size_t n, std::vector<Accuracy> raw)
    : n_(n), raw_(std::move(raw)), monotone_(raw_.size(), 0.0) {
  // Every single-bit-removed subset of S is numerically smaller than S, so an
  // ascending sweep sees all of them finalized.
  for (std::uint64_t s = 1; s < monotone_.size(); ++s) {
    Accuracy best = raw_[s];
    for (std::uint64_t m = s; m != 0; m &= m - 1) best = std::max(best, monotone_[s & ~(m & -m)]);
    monotone_[s] = best;
  }
  a_star_ = monotone_.back();
}

CoalitionTable CoalitionTable::from_entries(std::size_t n,
                                            const std::vector<std::pair<std::uint64_t, Accuracy>>& entries) {
  if (n == 0) throw ConfigError("coalition table needs at least one dataset");
  if (n > kMaxSize)
    throw SizeLimitError(fmt::format("coalition table size {} exceeds the limit of {} datasets", n, kMaxSize));
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Accuracy> raw(count, 0.0);
  std::vector<bool> seen(count, false);
  for (const auto& [mask, acc] : entries) {
    if (mask >= count) throw ConfigError(fmt::format("coalition {} is outside 0..{}", mask, count - 1));
    if (seen[mask]) throw ConfigError(fmt::format("duplicate coalition {}", mask));
    if (!(acc >= 0.0 && acc <= 1.0)) throw ConfigError(fmt::format("coalition {}: accuracy {} outside [0,1]", mask, acc));
    if (mask == 0 && acc != 0.0) throw ConfigError("the empty coalition must have accuracy 0");
    seen[mask] = true;
    raw[mask] = acc;
  }
  return CoalitionTable(n, std::move(raw));
}

CoalitionTable load_table(std::istream& in, std::size_t n) {
  if (n > CoalitionTable::kMaxSize)
    throw SizeLimitError(fmt::format("coalition table size {} exceeds the limit of {} datasets", n,
                                     CoalitionTable::kMaxSize));
  const auto table = csv::read(in);
  const auto coalition_col = table.column("coalition");
  const auto accuracy_col = table.column("accuracy");
  if (!coalition_col || !accuracy_col) throw ConfigError("table CSV header must be `coalition,accuracy`");
  std::vector<std::pair<std::uint64_t, Accuracy>> entries;
  entries.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto mask = csv::parse_u64(row[*coalition_col]);
    const auto acc = csv::parse_double(row[*accuracy_col]);
    if (!mask || !acc) throw ConfigError(fmt::format("table line {}: malformed row", table.line_numbers[r]));
    entries.emplace_back(*mask, *acc);
  }
  try {
    return CoalitionTable::from_entries(n, entries);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("coalition table: {}", e.what()));
  }
}

CoalitionTable load_table(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open coalition table '{}'", path));
  try {
    return load_table(in, n);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void write_table_csv(std::ostream& out, const CoalitionTable& table) {
  out << "coalition,accuracy\n";
  const auto& raw = table.raw();
  for (std::uint64_t s = 0; s < raw.size(); ++s) out << s << ',' << csv::format_double(raw[s]) << '\n';
}

} // namespace tbyb
