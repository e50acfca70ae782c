#pragma once
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tbyb/catalog.hpp"

namespace tbyb {

enum class ShapleyMethod { exact, monte_carlo };

std::string_view to_string(ShapleyMethod m) noexcept;

struct ShapleyResult {
  std::vector<double> values;
  ShapleyMethod method = ShapleyMethod::exact;
  std::size_t samples = 0;    // monte_carlo only
  std::uint64_t seed = 0;     // monte_carlo only
  std::vector<double> std_error; // monte_carlo only, one per player
};

inline constexpr std::size_t kMaxExactShapleyPlayers = 20;

// Exact Shapley values of the game phi(S) = vf(oracle.accuracy(S)) by subset
// enumeration. Throws SizeLimitError above kMaxExactShapleyPlayers.
ShapleyResult shapley_exact(const AccuracyOracle& oracle, const ValueFunction& vf, std::size_t workers = 1);

// Permutation-sampling estimate. Permutation k is drawn from its own stream
// derived from (seed, k) and reductions run in a fixed block order, so the
// result is bit-identical for any worker count.
ShapleyResult shapley_monte_carlo(const AccuracyOracle& oracle, const ValueFunction& vf, std::size_t samples,
                                  std::uint64_t seed, std::size_t workers = 1);

// Marginal contribution of each player when joining in `order`. Entries are
// indexed by player id; `order` must be a permutation of 0..n-1.
std::vector<double> permutation_contributions(const AccuracyOracle& oracle, const ValueFunction& vf,
                                              std::span<const std::size_t> order);

} // namespace tbyb
