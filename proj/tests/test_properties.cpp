// Invariants checked over randomly generated instances.
#include <doctest.h>

#include "support.hpp"
#include "tbyb/pricing.hpp"
#include "tbyb/strategies.hpp"
#include "tbyb/synthetic_oracle.hpp"
#include "tbyb/table_oracle.hpp"

using namespace tbyb;

namespace {

struct Instance {
  std::unique_ptr<AccuracyOracle> oracle;
  Catalog catalog;
};

// Synthetic model with random parameters, pricing scheme and volumes.
Instance random_synthetic(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 1 + gen() % 10;
  auto oracle = std::make_unique<SyntheticOracle>(n, 0.3 + 2.7 * u(gen), 1.0 + 2.0 * u(gen));
  const auto kind = static_cast<PricingKind>(gen() % 4);
  const auto volumes = generate_volumes({static_cast<VolumeKind>(gen() % 2), 0.5}, n, oracle->di(), gen());
  const auto base = Catalog::from_prices(std::vector<Money>(n, 0.0), volumes);
  auto catalog = apply_pricing(base, {kind, 0.2 + 5.0 * u(gen), gen()}, *oracle, ValueFunction{});
  return {std::move(oracle), std::move(catalog)};
}

// Monotonized random table with random prices.
Instance random_table(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 1 + gen() % 8;
  std::vector<std::pair<std::uint64_t, Accuracy>> entries;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s)
    if (gen() % 3 != 0) entries.emplace_back(s, u(gen));
  auto oracle = std::make_unique<CoalitionTable>(CoalitionTable::from_entries(n, entries));
  std::vector<Money> prices(n);
  for (auto& p : prices) p = 0.3 * u(gen);
  return {std::move(oracle), Catalog::from_prices(prices)};
}

const std::vector<StrategyKind> kSequential{StrategyKind::s_tbyb, StrategyKind::a_tbyb, StrategyKind::volume_heuristic,
                                            StrategyKind::price_heuristic};

} // namespace

TEST_CASE("no strategy beats the optimal holding and every trace replays exactly") {
  std::mt19937_64 gen(1234);
  const ValueFunction vf;
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = trial % 3 == 2 ? random_table(gen) : random_synthetic(gen);
    CAPTURE(trial);
    const auto best = run_optimal(inst.catalog, *inst.oracle, vf);
    CHECK_FALSE(verify_trace(best, inst.catalog, *inst.oracle, vf));
    for (auto kind : kSequential)
      for (double lambda : {0.0, 0.1, 0.5}) {
        StrategyConfig c{.kind = kind, .lambda = lambda, .seed = gen()};
        const auto t = run_strategy(inst.catalog, *inst.oracle, vf, c);
        CHECK(t.final_profit <= best.final_profit + 1e-9);
        CHECK_FALSE(verify_trace(t, inst.catalog, *inst.oracle, vf));
        Accuracy prev = 0.0;
        for (const auto& r : t.rounds) {
          CHECK(r.accuracy_after >= prev);
          prev = r.accuracy_after;
        }
      }
  }
}

TEST_CASE("S-TBYB first purchase satisfies the exact admission rule") {
  std::mt19937_64 gen(77);
  const ValueFunction vf;
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_synthetic(gen);
    const double lambda = (gen() % 6) / 10.0;
    const auto t = run_s_tbyb(inst.catalog, *inst.oracle, vf, {.kind = StrategyKind::s_tbyb, .lambda = lambda});
    if (t.rounds.empty()) continue;
    const auto& first = t.rounds.front();
    const Accuracy alone = inst.oracle->accuracy(Coalition::single(first.bought));
    CHECK(vf(alone) - first.price >= -lambda * vf(inst.oracle->max_accuracy()));
  }
}

TEST_CASE("A-TBYB purchases never exceed the admissible loss") {
  std::mt19937_64 gen(99);
  const ValueFunction vf;
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = trial % 2 ? random_table(gen) : random_synthetic(gen);
    const double lambda = (gen() % 6) / 10.0;
    const auto t = run_a_tbyb(inst.catalog, *inst.oracle, vf, {.kind = StrategyKind::a_tbyb, .lambda = lambda});
    const Money v_star = vf(inst.oracle->max_accuracy());
    Money v_before = vf(0.0);
    for (const auto& r : t.rounds) {
      CHECK(vf(r.accuracy_after) - v_before - r.price >= -lambda * (v_star - v_before));
      v_before = vf(r.accuracy_after);
    }
    // Query bound for the realized number of decision rounds.
    std::uint64_t bound = 0;
    for (std::size_t i = 0; i < t.decision_rounds; ++i) bound += inst.catalog.size() - i;
    CHECK(t.queries <= bound);
  }
}

TEST_CASE("A-TBYB without risk never buys at a marginal loss on interchangeable concave data") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ValueFunction vf;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 10;
    const SyntheticOracle m(n, 0.2 + 0.8 * u(gen), 1.0);
    const auto catalog = apply_pricing(Catalog::from_prices(std::vector<Money>(n, 0.0)),
                                       {PricingKind::random, 0.1 + 3.0 * u(gen), gen()}, m, vf);
    const auto t = run_a_tbyb(catalog, m, vf, {.kind = StrategyKind::a_tbyb, .lambda = 0.0});
    Accuracy before = 0.0;
    for (const auto& r : t.rounds) {
      CHECK(r.accuracy_after - before - r.price >= 0.0);
      before = r.accuracy_after;
    }
  }
}
