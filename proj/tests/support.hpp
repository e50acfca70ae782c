#pragma once
// Reference implementations used as test oracles. They share no code with the
// library paths they check beyond the oracle contract itself.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tbyb/catalog.hpp"

namespace tbyb::testing {

// Shapley values by averaging marginal contributions over all n! orderings.
inline std::vector<double> shapley_by_permutations(const AccuracyOracle& oracle, const ValueFunction& vf) {
  const std::size_t n = oracle.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sum(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    double prev = vf(oracle.accuracy(Coalition::from_mask(0)));
    for (std::size_t p : order) {
      mask |= std::uint64_t{1} << p;
      const double now = vf(oracle.accuracy(Coalition::from_mask(mask)));
      sum[p] += now - prev;
      prev = now;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& s : sum) s /= count;
  return sum;
}

// max over all submasks of `mask` of raw[submask], by direct submask enumeration.
inline double brute_subset_max(const std::vector<double>& raw, std::uint64_t mask) {
  double best = raw[0];
  for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
    best = std::max(best, raw[sub]);
    if (sub == 0) break;
  }
  return best;
}

struct BestHolding {
  std::uint64_t mask = 0;
  double profit = 0.0;
};

// Exhaustive best holding: scans subsets by size, then by mask.
inline BestHolding brute_best_holding(const std::vector<double>& prices, const AccuracyOracle& oracle,
                                      const ValueFunction& vf) {
  const std::size_t n = prices.size();
  BestHolding best{0, vf(oracle.accuracy(Coalition{}))};
  for (std::size_t size = 1; size <= n; ++size) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != size) continue;
      double cost = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (m >> i & 1) cost += prices[i];
      const double p = vf(oracle.accuracy(Coalition::from_mask(m))) - cost;
      if (p > best.profit) best = {m, p};
    }
  }
  return best;
}

// Direct evaluation of the parametric accuracy model.
inline double synthetic_accuracy(std::size_t n, double mup, double di, std::uint64_t mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::pow(di, static_cast<double>(i + 1));
    den += w;
    if (mask >> i & 1) num += w;
  }
  return std::pow(num / den, mup);
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tbyb-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

} // namespace tbyb::testing
