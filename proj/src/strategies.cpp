#include "tbyb/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "tbyb/error.hpp"
#include "tbyb/rng.hpp"

namespace tbyb {

namespace {

// Accumulates purchases and records one trace round per buy.
class TraceRecorder {
public:
  TraceRecorder(const Catalog& catalog, const ValueFunction& vf)
      : catalog_(catalog), vf_(vf), state_(PurchaseState::initial(catalog, vf)) {
    trace_.initial_profit = profit(state_, vf_);
    trace_.final_profit = trace_.initial_profit;
  }

  const PurchaseState& state() const noexcept { return state_; }

  void buy(DatasetId id, Accuracy accuracy_after) {
    const auto& d = catalog_[id];
    state_.buy(d, accuracy_after, vf_);
    const Money p = profit(state_, vf_);
    trace_.rounds.push_back(PurchaseRound{state_.round, id, d.price, accuracy_after, p});
    trace_.final_profit = p;
  }

  void count_decision() { ++trace_.decision_rounds; }

  PurchaseTrace finish(StopReason reason, std::uint64_t queries) {
    trace_.owned = state_.owned;
    trace_.stop_reason = reason;
    trace_.queries = queries;
    return std::move(trace_);
  }

private:
  const Catalog& catalog_;
  const ValueFunction& vf_;
  PurchaseState state_;
  PurchaseTrace trace_;
};

void check_sizes(const Catalog& catalog, const AccuracyOracle& oracle) {
  if (catalog.size() != oracle.size())
    throw ConfigError(fmt::format("catalog has {} datasets but the oracle covers {}", catalog.size(), oracle.size()));
}

Accuracy resolve_a_star(const AccuracyOracle& oracle, const StrategyConfig& cfg) {
  return cfg.a_star_override.value_or(oracle.max_accuracy());
}

// Highest score; ties go to the lower price, then the lower id.
struct BestCandidate {
  std::optional<DatasetId> id;
  double score = -std::numeric_limits<double>::infinity();
  Money price = 0.0;

  void offer(DatasetId candidate, double s, Money p) {
    if (!id || s > score || (s == score && p < price)) {
      id = candidate;
      score = s;
      price = p;
    }
  }
};

} // namespace

std::string_view to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::optimal: return "optimal";
    case StrategyKind::s_tbyb: return "s_tbyb";
    case StrategyKind::a_tbyb: return "a_tbyb";
    case StrategyKind::volume_heuristic: return "volume_heuristic";
    case StrategyKind::price_heuristic: return "price_heuristic";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view s) noexcept {
  for (auto k : {StrategyKind::optimal, StrategyKind::s_tbyb, StrategyKind::a_tbyb, StrategyKind::volume_heuristic,
                 StrategyKind::price_heuristic})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

void StrategyConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError(fmt::format("lambda must be >= 0, got {}", lambda));
  if (a_star_override && !(*a_star_override > 0.0 && *a_star_override <= 1.0))
    throw ConfigError(fmt::format("a_star override must lie in (0, 1], got {}", *a_star_override));
}

EstimatorState EstimatorState::after_purchase(Accuracy now, Accuracy before, Accuracy last_single) {
  EstimatorState e;
  e.last_single_accuracy = last_single;
  e.rho = last_single < 1e-12 ? 1.0 : (now - before) / last_single;
  return e;
}

Accuracy EstimatorState::predict(Accuracy candidate_single, Accuracy now, Accuracy a_star) const {
  const Accuracy predicted = now + rho * candidate_single * (a_star - now);
  return std::max(now, std::min(a_star, predicted));
}

PurchaseTrace run_optimal(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf) {
  check_sizes(catalog, oracle);
  const std::size_t n = catalog.size();
  if (n > kMaxOptimalDatasets)
    throw SizeLimitError(fmt::format("optimal purchase enumerates 2^N holdings and supports at most {} datasets (got {})",
                                     kMaxOptimalDatasets, n));
  const auto prices = catalog.prices();
  const std::uint64_t count = std::uint64_t{1} << n;

  std::uint64_t best_mask = 0;
  Money best_profit = -std::numeric_limits<double>::infinity();
  int best_size = 0;
  for (std::uint64_t s = 0; s < count; ++s) {
    const auto c = Coalition::from_mask(s);
    // Ascending-id summation, matching the order in which the trace accumulates spend.
    Money cost = 0.0;
    c.for_each([&](DatasetId id) { cost += prices[id.index]; });
    const Money p = vf(oracle.accuracy(c)) - cost;
    const int size = std::popcount(s);
    if (p > best_profit || (p == best_profit && size < best_size)) {
      best_profit = p;
      best_mask = s;
      best_size = size;
    }
  }

  TraceRecorder rec(catalog, vf);
  Coalition prefix;
  for (auto id : Coalition::from_mask(best_mask).members()) {
    prefix = prefix.with(id);
    rec.buy(id, oracle.accuracy(prefix));
  }
  return rec.finish(StopReason::catalog_exhausted, count);
}

PurchaseTrace run_s_tbyb(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                         const StrategyConfig& cfg) {
  check_sizes(catalog, oracle);
  cfg.validate();
  OracleSession session(oracle);
  const std::size_t n = catalog.size();
  const Accuracy a_star = resolve_a_star(oracle, cfg);
  const Money v_star = vf(a_star);

  std::vector<Accuracy> single(n);
  std::vector<Money> single_profit(n);
  for (std::size_t i = 0; i < n; ++i) {
    single[i] = session.query(Coalition::single(DatasetId{i}));
    single_profit[i] = vf(single[i]) - catalog[DatasetId{i}].price;
  }

  TraceRecorder rec(catalog, vf);
  EstimatorState estimator;
  while (true) {
    const auto& st = rec.state();
    if (st.remaining.empty()) return rec.finish(StopReason::catalog_exhausted, session.queries());

    BestCandidate best;
    st.remaining.for_each([&](DatasetId id) { best.offer(id, single_profit[id.index], catalog[id].price); });
    const DatasetId pick = *best.id;
    rec.count_decision();

    bool buy = false;
    if (st.round == 0) {
      // Nothing owned yet: the individual accuracy is the exact outcome.
      buy = single_profit[pick.index] >= -cfg.lambda * v_star;
    } else {
      const Accuracy predicted = estimator.predict(single[pick.index], st.accuracy, a_star);
      buy = vf(predicted) - st.value - catalog[pick].price >= -cfg.lambda * (v_star - st.value);
    }
    if (!buy) return rec.finish(StopReason::condition_failed, session.queries());

    const Accuracy after = st.round == 0 ? single[pick.index] : session.query(st.owned.with(pick));
    const Accuracy before = st.accuracy;
    rec.buy(pick, after);
    estimator = EstimatorState::after_purchase(after, before, single[pick.index]);
  }
}

PurchaseTrace run_a_tbyb(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                         const StrategyConfig& cfg) {
  check_sizes(catalog, oracle);
  cfg.validate();
  OracleSession session(oracle);
  const Accuracy a_star = resolve_a_star(oracle, cfg);
  const Money v_star = vf(a_star);
  std::vector<Accuracy> joint(catalog.size());

  TraceRecorder rec(catalog, vf);
  while (true) {
    const auto& st = rec.state();
    if (st.remaining.empty()) return rec.finish(StopReason::catalog_exhausted, session.queries());
    if (cfg.query_budget && session.queries() + st.remaining.size() > *cfg.query_budget)
      return rec.finish(StopReason::query_budget_exhausted, session.queries());

    rec.count_decision();
    BestCandidate best;
    st.remaining.for_each([&](DatasetId id) {
      joint[id.index] = session.query(st.owned.with(id));
      best.offer(id, vf(joint[id.index]) - catalog[id].price, catalog[id].price);
    });
    const DatasetId pick = *best.id;
    const Money gain = vf(joint[pick.index]) - st.value - catalog[pick].price;
    if (!(gain >= -cfg.lambda * (v_star - st.value))) return rec.finish(StopReason::condition_failed, session.queries());
    rec.buy(pick, joint[pick.index]);
  }
}

PurchaseTrace run_volume_heuristic(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                                   const StrategyConfig& cfg) {
  check_sizes(catalog, oracle);
  cfg.validate();
  OracleSession session(oracle);
  const Money v_star = vf(resolve_a_star(oracle, cfg));

  TraceRecorder rec(catalog, vf);
  while (true) {
    const auto& st = rec.state();
    if (st.remaining.empty()) return rec.finish(StopReason::catalog_exhausted, session.queries());
    rec.count_decision();

    std::optional<DatasetId> pick;
    double best_ratio = 0.0;
    st.remaining.for_each([&](DatasetId id) {
      const auto& d = catalog[id];
      const double ratio = d.price > 0.0 ? d.volume / d.price : std::numeric_limits<double>::infinity();
      if (!pick || ratio > best_ratio || (ratio == best_ratio && d.volume > catalog[*pick].volume)) {
        pick = id;
        best_ratio = ratio;
      }
    });
    // Worst case the purchase adds nothing, so the whole price is the loss.
    if (!(catalog[*pick].price <= cfg.lambda * (v_star - st.value)))
      return rec.finish(StopReason::condition_failed, session.queries());
    rec.buy(*pick, session.query(st.owned.with(*pick)));
  }
}

PurchaseTrace run_price_heuristic(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                                  const StrategyConfig& cfg) {
  check_sizes(catalog, oracle);
  cfg.validate();
  OracleSession session(oracle);
  const Money v_star = vf(resolve_a_star(oracle, cfg));
  Rng rng(cfg.seed);

  TraceRecorder rec(catalog, vf);
  std::vector<DatasetId> affordable;
  while (true) {
    const auto& st = rec.state();
    if (st.remaining.empty()) return rec.finish(StopReason::catalog_exhausted, session.queries());
    rec.count_decision();

    const Money admissible = cfg.lambda * (v_star - st.value);
    affordable.clear();
    st.remaining.for_each([&](DatasetId id) {
      if (catalog[id].price <= admissible) affordable.push_back(id);
    });
    if (affordable.empty()) return rec.finish(StopReason::no_candidate, session.queries());
    const DatasetId pick = affordable[rng.uniform_index(affordable.size())];
    rec.buy(pick, session.query(st.owned.with(pick)));
  }
}

PurchaseTrace run_strategy(const Catalog& catalog, const AccuracyOracle& oracle, const ValueFunction& vf,
                           const StrategyConfig& cfg) {
  switch (cfg.kind) {
    case StrategyKind::optimal: return run_optimal(catalog, oracle, vf);
    case StrategyKind::s_tbyb: return run_s_tbyb(catalog, oracle, vf, cfg);
    case StrategyKind::a_tbyb: return run_a_tbyb(catalog, oracle, vf, cfg);
    case StrategyKind::volume_heuristic: return run_volume_heuristic(catalog, oracle, vf, cfg);
    case StrategyKind::price_heuristic: return run_price_heuristic(catalog, oracle, vf, cfg);
  }
  throw ConfigError("unknown strategy kind");
}

} // namespace tbyb
