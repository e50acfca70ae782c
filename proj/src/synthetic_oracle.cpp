#include "tbyb/synthetic_oracle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tbyb/error.hpp"

namespace tbyb {

SyntheticOracle::SyntheticOracle(std::size_t n, double mup, double di) : mup_(mup), di_(di) {
  if (n == 0 || n > Coalition::kMaxMembers)
    throw ConfigError(fmt::format("synthetic model size must be in [1, {}], got {}", Coalition::kMaxMembers, n));
  if (!(mup > 0.0) || !std::isfinite(mup)) throw ConfigError(fmt::format("MUP must be > 0, got {}", mup));
  if (!(di >= 1.0) || !std::isfinite(di)) throw ConfigError(fmt::format("DI must be >= 1, got {}", di));
  weights_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) weights_.push_back(std::pow(di, static_cast<double>(k + 1)));
  // Same summation order as accuracy(), so the full coalition yields exactly 1.
  for (double w : weights_) weight_total_ += w;
}

Accuracy SyntheticOracle::accuracy(Coalition c) const {
  if (c.empty()) return 0.0;
  double sum = 0.0;
  c.for_each([&](DatasetId id) { sum += weights_[id.index]; });
  const double fraction = sum / weight_total_;
  return mup_ == 1.0 ? fraction : std::pow(fraction, mup_);
}

} // namespace tbyb
