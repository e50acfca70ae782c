#include "tbyb/shapley.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "tbyb/error.hpp"
#include "tbyb/parallel.hpp"
#include "tbyb/rng.hpp"

namespace tbyb {

namespace {

constexpr std::size_t kSamplesPerBlock = 64;

// Running mean / M2 per player; merged pairwise in a fixed order.
struct BlockStats {
  double count = 0.0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit BlockStats(std::size_t n) : mean(n, 0.0), m2(n, 0.0) {}

  void add(std::span<const double> x) {
    count += 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double delta = x[i] - mean[i];
      mean[i] += delta / count;
      m2[i] += delta * (x[i] - mean[i]);
    }
  }

  void merge(const BlockStats& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double delta = o.mean[i] - mean[i];
      mean[i] += delta * o.count / total;
      m2[i] += o.m2[i] + delta * delta * count * o.count / total;
    }
    count = total;
  }
};

} // namespace

std::string_view to_string(ShapleyMethod m) noexcept {
  return m == ShapleyMethod::exact ? "exact" : "monte_carlo";
}

ShapleyResult shapley_exact(const AccuracyOracle& oracle, const ValueFunction& vf, std::size_t workers) {
  const std::size_t n = oracle.size();
  if (n > kMaxExactShapleyPlayers)
    throw SizeLimitError(fmt::format("exact Shapley supports at most {} datasets (got {}); use the Monte Carlo method",
                                     kMaxExactShapleyPlayers, n));
  const std::uint64_t count = std::uint64_t{1} << n;

  std::vector<double> phi(count);
  for (std::uint64_t s = 0; s < count; ++s) phi[s] = vf(oracle.accuracy(Coalition::from_mask(s)));

  // |S|! (n-|S|-1)! / n! = 1 / (n * C(n-1, |S|))
  std::vector<double> weight(n);
  double binom = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    weight[k] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - k) / static_cast<double>(k + 1);
  }

  ShapleyResult result;
  result.method = ShapleyMethod::exact;
  result.values.assign(n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double sum = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
      if (s & bit) continue;
      sum += weight[static_cast<std::size_t>(std::popcount(s))] * (phi[s | bit] - phi[s]);
    }
    result.values[i] = sum;
  });
  return result;
}

std::vector<double> permutation_contributions(const AccuracyOracle& oracle, const ValueFunction& vf,
                                              std::span<const std::size_t> order) {
  if (order.size() != oracle.size())
    throw ConfigError(fmt::format("ordering has {} players, the game has {}", order.size(), oracle.size()));
  std::vector<double> out(oracle.size(), 0.0);
  Coalition s;
  double prev = vf(oracle.accuracy(s));
  for (std::size_t player : order) {
    if (player >= oracle.size() || s.contains(DatasetId{player}))
      throw ConfigError(fmt::format("ordering is not a permutation (player {})", player));
    s = s.with(DatasetId{player});
    const double cur = vf(oracle.accuracy(s));
    out[player] = cur - prev;
    prev = cur;
  }
  return out;
}

ShapleyResult shapley_monte_carlo(const AccuracyOracle& oracle, const ValueFunction& vf, std::size_t samples,
                                  std::uint64_t seed, std::size_t workers) {
  if (samples == 0) throw ConfigError("Monte Carlo Shapley needs at least one sample");
  const std::size_t n = oracle.size();
  const std::size_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<BlockStats> stats(blocks, BlockStats(n));

  parallel_for(blocks, workers, [&](std::size_t b) {
    std::vector<std::size_t> order(n);
    const std::size_t end = std::min(samples, (b + 1) * kSamplesPerBlock);
    for (std::size_t k = b * kSamplesPerBlock; k < end; ++k) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(SeedMix(seed).add(std::uint64_t{k}).value());
      rng.shuffle(std::span<std::size_t>(order));
      stats[b].add(permutation_contributions(oracle, vf, order));
    }
  });

  BlockStats total(n);
  for (const auto& s : stats) total.merge(s);

  ShapleyResult result;
  result.method = ShapleyMethod::monte_carlo;
  result.samples = samples;
  result.seed = seed;
  result.values = total.mean;
  result.std_error.assign(n, 0.0);
  if (samples > 1) {
    const double m = static_cast<double>(samples);
    for (std::size_t i = 0; i < n; ++i) result.std_error[i] = std::sqrt(total.m2[i] / (m - 1.0) / m);
  }
  return result;
}

} // namespace tbyb
