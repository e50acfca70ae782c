#pragma once
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tbyb/catalog.hpp"

namespace tbyb {

// Measured coalition accuracies, monotonized so that a coalition is worth at
// least as much as its best subset: monotone[S] = max_{S' subset of S} raw[S'].
//
// Coalitions absent from the input count as accuracy 0 before monotonization.
// A table holding only singletons and the grand coalition therefore reports
// each mid-size coalition at the accuracy of its best single member, which
// understates it.
class CoalitionTable final : public AccuracyOracle {
public:
  static constexpr std::size_t kMaxSize = 20;

  // Throws ConfigError on duplicate or out-of-range coalitions, accuracies outside
  // [0,1] or a nonzero empty coalition; SizeLimitError when n > kMaxSize.
  static CoalitionTable from_entries(std::size_t n, const std::vector<std::pair<std::uint64_t, Accuracy>>& entries);

  std::size_t size() const override { return n_; }
  Accuracy accuracy(Coalition c) const override { return monotone_[c.mask()]; }
  Accuracy max_accuracy() const override { return a_star_; }

  const std::vector<Accuracy>& monotone() const noexcept { return monotone_; }
  const std::vector<Accuracy>& raw() const noexcept { return raw_; }

private:
  CoalitionTable(std::size_t n, std::vector<Accuracy> raw);

  std::size_t n_;
  std::vector<Accuracy> raw_;
  std::vector<Accuracy> monotone_;
  Accuracy a_star_ = 0.0;
};

// CSV with header `coalition,accuracy`; coalition is the decimal bitmask.
CoalitionTable load_table(std::istream& in, std::size_t n);
CoalitionTable load_table(const std::string& path, std::size_t n);

void write_table_csv(std::ostream& out, const CoalitionTable& table);

} // namespace tbyb
