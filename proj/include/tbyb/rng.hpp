#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace tbyb {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Order-sensitive 64-bit seed mixer. Stable across platforms and builds.
class SeedMix {
public:
  explicit constexpr SeedMix(std::uint64_t base) noexcept : h_(splitmix64(base)) {}

  constexpr SeedMix& add(std::uint64_t v) noexcept {
    h_ = splitmix64(h_ ^ splitmix64(v + 0x632BE59BD9B4E019ULL));
    return *this;
  }
  SeedMix& add(double v) noexcept {
    // +0.0 and -0.0 compare equal, so they mix equal.
    return add(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
  }
  constexpr SeedMix& add(std::string_view s) noexcept {
    std::uint64_t fnv = 0xCBF29CE484222325ULL;
    for (char c : s) {
      fnv ^= static_cast<unsigned char>(c);
      fnv *= 0x100000001B3ULL;
    }
    return add(fnv);
  }

  constexpr std::uint64_t value() const noexcept { return h_; }

private:
  std::uint64_t h_;
};

// mt19937_64 output is fixed by the standard, but the <random> distributions are not,
// so sampling is done here by hand to keep seeded output identical across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace tbyb
