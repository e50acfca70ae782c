#include <doctest.h>

#include <numeric>

#include "support.hpp"
#include "tbyb/error.hpp"
#include "tbyb/shapley.hpp"
#include "tbyb/synthetic_oracle.hpp"

using namespace tbyb;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST_CASE("symmetric game splits the grand value equally") {
  for (double mup : {0.5, 1.0, 2.0}) {
    const auto r = shapley_exact(SyntheticOracle(4, mup, 1.0), ValueFunction{});
    REQUIRE(r.values.size() == 4);
    for (double v : r.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.method == ShapleyMethod::exact);
    CHECK(r.std_error.empty());
  }
}

TEST_CASE("dummy player receives zero") {
  // phi({0}) = phi({1}) = 0.2, phi({0,1}) = 0.6, player 2 adds nothing anywhere.
  const FunctionOracle game(3, [](Coalition c) {
    const auto core = c.mask() & 0b011;
    return core == 0b011 ? 0.6 : core == 0 ? 0.0 : 0.2;
  });
  const auto r = shapley_exact(game, ValueFunction{});
  CHECK(r.values[2] == 0.0);
  CHECK(r.values[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.values[1] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("exact values match averaging over all orderings") {
  const SyntheticOracle m(5, 1.0, 2.0);
  const auto r = shapley_exact(m, ValueFunction{});
  const auto ref = testing::shapley_by_permutations(m, ValueFunction{});
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.values[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  // Additive game: each value is the dataset's own weight share, 2^(i+1) / 62.
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.values[i] == doctest::Approx(std::ldexp(1.0, int(i) + 1) / 62.0).epsilon(1e-12));
}

TEST_CASE("exact values under a non-identity value function") {
  const SyntheticOracle m(4, 1.7, 1.6);
  const auto vf = ValueFunction::table({{0.0, 0.0}, {0.3, 0.05}, {0.7, 0.9}, {1.0, 1.2}});
  const auto r = shapley_exact(m, vf);
  const auto ref = testing::shapley_by_permutations(m, vf);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.values[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  CHECK(sum(r.values) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("exact enumeration is independent of worker count") {
  const SyntheticOracle m(12, 0.6, 1.3);
  const auto one = shapley_exact(m, ValueFunction{}, 1);
  for (std::size_t w : {2u, 3u, 8u}) CHECK(shapley_exact(m, ValueFunction{}, w).values == one.values);
}

TEST_CASE("exact enumeration size limit") {
  CHECK_THROWS_AS(shapley_exact(SyntheticOracle(21, 1.0, 1.0), ValueFunction{}), SizeLimitError);
  CHECK_NOTHROW(shapley_exact(SyntheticOracle(3, 1.0, 1.0), ValueFunction{}));
}

TEST_CASE("Monte Carlo agrees with exact within three standard errors") {
  for (double mup : {0.5, 2.0}) {
    const SyntheticOracle m(8, mup, 2.0);
    const auto exact = shapley_exact(m, ValueFunction{});
    const auto mc = shapley_monte_carlo(m, ValueFunction{}, 20000, 99);
    CHECK(mc.method == ShapleyMethod::monte_carlo);
    CHECK(mc.samples == 20000);
    REQUIRE(mc.std_error.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(mc.std_error[i] > 0.0);
      CHECK(std::abs(mc.values[i] - exact.values[i]) <= 3.0 * mc.std_error[i]);
    }
  }
}

TEST_CASE("Monte Carlo on an additive game is exact up to rounding") {
  // With MUP = 1 every ordering yields the same contributions, so the spread is zero.
  const SyntheticOracle m(8, 1.0, 2.0);
  const auto exact = shapley_exact(m, ValueFunction{});
  const auto mc = shapley_monte_carlo(m, ValueFunction{}, 20000, 5);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(mc.values[i] == doctest::Approx(exact.values[i]).epsilon(1e-12));
    CHECK(mc.std_error[i] < 1e-12);
  }
}

TEST_CASE("single ordering contributions telescope to the grand value") {
  const SyntheticOracle m(2, 0.8, 3.0);
  const auto mc = shapley_monte_carlo(m, ValueFunction{}, 1, 17);
  CHECK(sum(mc.values) == doctest::Approx(1.0).epsilon(1e-15));
  for (double e : mc.std_error) CHECK(e == 0.0);

  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen() % 10;
    const SyntheticOracle g(n, 0.3 + (gen() % 100) / 30.0, 1.0 + (gen() % 100) / 50.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    CHECK(sum(permutation_contributions(g, ValueFunction{}, order)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo is reproducible and worker-independent") {
  const SyntheticOracle m(7, 1.8, 1.5);
  const auto a = shapley_monte_carlo(m, ValueFunction{}, 3001, 42, 1);
  const auto b = shapley_monte_carlo(m, ValueFunction{}, 3001, 42, 1);
  CHECK(a.values == b.values);
  CHECK(a.std_error == b.std_error);
  for (std::size_t w : {2u, 4u, 7u}) {
    const auto c = shapley_monte_carlo(m, ValueFunction{}, 3001, 42, w);
    CHECK(c.values == a.values);
    CHECK(c.std_error == a.std_error);
  }
  CHECK(shapley_monte_carlo(m, ValueFunction{}, 3001, 43).values != a.values);
}

TEST_CASE("Monte Carlo rejects zero samples") {
  CHECK_THROWS_AS(shapley_monte_carlo(SyntheticOracle(3, 1.0, 1.0), ValueFunction{}, 0, 1), ConfigError);
}

TEST_CASE("permutation contributions reject malformed orders") {
  const SyntheticOracle m(3, 1.0, 1.0);
  CHECK_THROWS_AS(permutation_contributions(m, ValueFunction{}, std::vector<std::size_t>{0, 1}), ConfigError);
  CHECK_THROWS_AS(permutation_contributions(m, ValueFunction{}, std::vector<std::size_t>{0, 1, 1}), ConfigError);
}
