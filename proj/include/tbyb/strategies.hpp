#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tbyb/catalog.hpp"

namespace tbyb {

enum class StrategyKind { optimal, s_tbyb, a_tbyb, volume_heuristic, price_heuristic };

std::string_view to_string(StrategyKind k) noexcept;
std::optional<StrategyKind> parse_strategy_kind(std::string_view s) noexcept;

inline constexpr double kDefaultLambda = 0.1;
inline constexpr std::size_t kMaxOptimalDatasets = 24;

struct StrategyConfig {
  StrategyKind kind = StrategyKind::optimal;
  // Largest admissible loss per purchase, as a fraction of the value still attainable.
  double lambda = kDefaultLambda;
  // The buyer's guess of the best attainable accuracy; the oracle's a* otherwise.
  std::optional<Accuracy> a_star_override;
  // A-TBYB only: total coalition trials the marketplace allows.
  std::optional<std::uint64_t> query_budget;
  std::uint64_t seed = 0; // price heuristic
  std::string label;      // display name; defaults to the kind

  std::string name() const { return label.empty() ? std::string(to_string(kind)) : label; }
  // Throws ConfigError on lambda < 0 or an override outside (0, 1].
  void validate() const;
};

// Exhaustive search over all 2^N holdings for the largest v(a(S)) - price(S).
// Ties prefer fewer datasets, then the smaller bitmask. The empty holding is
// eligible, so the result never loses money. Throws SizeLimitError for N > 24.
PurchaseTrace run_optimal(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf);

// Try-before-you-buy with individual accuracies only (N queries up front).
PurchaseTrace run_s_tbyb(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                         const StrategyConfig& cfg);

// Try-before-you-buy with a marginal-accuracy query for every remaining dataset each round.
PurchaseTrace run_a_tbyb(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                         const StrategyConfig& cfg);

// Buys the largest volume per unit price while the price fits the admissible loss.
PurchaseTrace run_volume_heuristic(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                                   const StrategyConfig& cfg);

// Buys uniformly at random among datasets whose price fits the admissible loss.
PurchaseTrace run_price_heuristic(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                                  const StrategyConfig& cfg);

PurchaseTrace run_strategy(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                           const StrategyConfig& cfg);

// Dilution ratio used by S-TBYB to predict the next dataset's added accuracy:
// rho = (a_n - a_{n-1}) / a(last purchased dataset alone).
struct EstimatorState {
  double rho = 1.0;
  Accuracy last_single_accuracy = 0.0;

  // rho falls back to 1 when the last dataset alone scores below 1e-12.
  static EstimatorState after_purchase(Accuracy now, Accuracy before, Accuracy last_single);

  // a_n + rho * a(candidate) * (a* - a_n), clamped to [a_n, a*].
  Accuracy predict(Accuracy candidate_single, Accuracy now, Accuracy a_star) const;
};

} // namespace tbyb
