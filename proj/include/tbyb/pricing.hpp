#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tbyb/catalog.hpp"

namespace tbyb {

enum class PricingKind { uniform, random, shapley, volume };

std::string_view to_string(PricingKind k) noexcept;
std::optional<PricingKind> parse_pricing_kind(std::string_view s) noexcept;

struct PricingScheme {
  PricingKind kind = PricingKind::uniform;
  Money tcod = 1.0;
  std::uint64_t seed = 0;            // random pricing, Monte Carlo Shapley
  std::size_t shapley_samples = 0;   // 0 selects exact Shapley
};

// Prices proportional to a per-scheme weight, scaled so they sum to tcod:
//   uniform -> 1, random -> U[0,1] draw, shapley -> max(phi_i, 0), volume -> vol_i.
// Throws DegeneratePricingError when every weight is zero, ConfigError when tcod <= 0.
std::vector<Money> compute_prices(const Catalog& catalog, const PricingScheme& scheme, const AccuracyOracle& oracle,
                                  const ValueFunction& vf);

Catalog apply_pricing(const Catalog& catalog, const PricingScheme& scheme, const AccuracyOracle& oracle,
                      const ValueFunction& vf);

// Synthetic volumes. `uniform` is independent of value; `importance` follows the
// synthetic weights DI^(i+1) times a lognormal(0, sigma) factor.
enum class VolumeKind { uniform, importance };

std::string_view to_string(VolumeKind k) noexcept;
std::optional<VolumeKind> parse_volume_kind(std::string_view s) noexcept;

struct VolumeSpec {
  VolumeKind kind = VolumeKind::uniform;
  double sigma = 0.5;
};

std::vector<double> generate_volumes(const VolumeSpec& spec, std::size_t n, double di, std::uint64_t seed);

} // namespace tbyb
