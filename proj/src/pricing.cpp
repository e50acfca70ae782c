#include "tbyb/pricing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tbyb/error.hpp"
#include "tbyb/rng.hpp"
#include "tbyb/shapley.hpp"

namespace tbyb {

std::string_view to_string(PricingKind k) noexcept {
  switch (k) {
    case PricingKind::uniform: return "uniform";
    case PricingKind::random: return "random";
    case PricingKind::shapley: return "shapley";
    case PricingKind::volume: return "volume";
  }
  return "unknown";
}

std::optional<PricingKind> parse_pricing_kind(std::string_view s) noexcept {
  for (auto k : {PricingKind::uniform, PricingKind::random, PricingKind::shapley, PricingKind::volume})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::string_view to_string(VolumeKind k) noexcept { return k == VolumeKind::uniform ? "uniform" : "importance"; }

std::optional<VolumeKind> parse_volume_kind(std::string_view s) noexcept {
  if (s == "uniform") return VolumeKind::uniform;
  if (s == "importance") return VolumeKind::importance;
  return std::nullopt;
}

std::vector<Money> compute_prices(const Catalog& catalog, const PricingScheme& scheme, const AccuracyOracle& oracle,
                                  const ValueFunction& vf) {
  if (!(scheme.tcod > 0.0) || !std::isfinite(scheme.tcod))
    throw ConfigError(fmt::format("TCOD must be > 0, got {}", scheme.tcod));
  const std::size_t n = catalog.size();
  std::vector<double> weight(n, 0.0);
  switch (scheme.kind) {
    case PricingKind::uniform:
      return std::vector<Money>(n, scheme.tcod / static_cast<double>(n));
    case PricingKind::random: {
      Rng rng(scheme.seed);
      for (auto& w : weight) w = rng.uniform01();
      break;
    }
    case PricingKind::shapley: {
      if (oracle.size() != n) throw ConfigError("oracle and catalog sizes differ");
      const auto shap = scheme.shapley_samples == 0 ? shapley_exact(oracle, vf)
                                                    : shapley_monte_carlo(oracle, vf, scheme.shapley_samples, scheme.seed);
      for (std::size_t i = 0; i < n; ++i) weight[i] = std::max(shap.values[i], 0.0);
      break;
    }
    case PricingKind::volume:
      weight = catalog.volumes();
      break;
  }
  double total = 0.0;
  for (double w : weight) total += w;
  if (!(total > 0.0))
    throw DegeneratePricingError(fmt::format("{} pricing: all weights are zero", to_string(scheme.kind)));
  std::vector<Money> prices(n);
  for (std::size_t i = 0; i < n; ++i) prices[i] = weight[i] / total * scheme.tcod;
  return prices;
}

Catalog apply_pricing(const Catalog& catalog, const PricingScheme& scheme, const AccuracyOracle& oracle,
                      const ValueFunction& vf) {
  return catalog.with_prices(compute_prices(catalog, scheme, oracle, vf));
}

std::vector<double> generate_volumes(const VolumeSpec& spec, std::size_t n, double di, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> vols(n);
  switch (spec.kind) {
    case VolumeKind::uniform:
      for (auto& v : vols) v = 1.0 - rng.uniform01(); // (0, 1]
      break;
    case VolumeKind::importance:
      if (!(spec.sigma >= 0.0)) throw ConfigError("volume sigma must be >= 0");
      for (std::size_t i = 0; i < n; ++i)
        vols[i] = std::pow(di, static_cast<double>(i + 1)) * std::exp(spec.sigma * rng.standard_normal());
      break;
  }
  return vols;
}

} // namespace tbyb
