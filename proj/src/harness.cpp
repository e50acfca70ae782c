#include "tbyb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "tbyb/csv.hpp"
#include "tbyb/error.hpp"
#include "tbyb/parallel.hpp"
#include "tbyb/rng.hpp"
#include "tbyb/shapley.hpp"
#include "tbyb/synthetic_oracle.hpp"

namespace tbyb {

namespace {

constexpr double kRelativeProfitFloor = 1e-9;

std::string describe(const CellKey& c, bool synthetic) {
  if (synthetic) return fmt::format("tcod={} mup={} di={} pricing={}", c.tcod, c.mup, c.di, to_string(c.pricing));
  return fmt::format("tcod={} pricing={}", c.tcod, to_string(c.pricing));
}

std::vector<CellKey> enumerate_cells(const ExperimentGrid& grid) {
  std::vector<CellKey> cells;
  const bool synthetic = grid.oracle.kind == OracleKind::synthetic;
  const std::vector<double> unused{0.0};
  for (double mup : synthetic ? grid.mup_values : unused)
    for (double di : synthetic ? grid.di_values : unused)
      for (PricingKind pricing : grid.pricing_kinds)
        for (double tcod : grid.tcod_values) cells.push_back(CellKey{tcod, mup, di, pricing});
  return cells;
}

StrategyConfig seeded_for_run(StrategyConfig cfg, std::uint64_t run_seed) {
  cfg.seed = SeedMix(run_seed).add(std::string_view(cfg.name())).add(cfg.seed).value();
  return cfg;
}

struct RunOutcome {
  Money profit = 0.0;
  std::uint64_t queries = 0;
  std::size_t purchases = 0;
};

struct TaskResult {
  std::optional<std::string> error;
  bool size_limit = false;
  std::optional<Money> optimal_profit;
  std::vector<RunOutcome> runs; // one per expanded strategy
};

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::string optional_field(const std::optional<double>& x) { return x ? csv::format_double(*x) : std::string(); }

} // namespace

void ExperimentGrid::validate() const {
  if (tcod_values.empty()) throw ConfigError("grid: tcod list is empty");
  if (pricing_kinds.empty()) throw ConfigError("grid: pricing list is empty");
  if (lambda_values.empty()) throw ConfigError("grid: lambda list is empty");
  if (strategies.empty()) throw ConfigError("grid: no strategies listed");
  if (repetitions < 1) throw ConfigError("grid: repetitions must be >= 1");
  if (oracle.kind == OracleKind::synthetic) {
    if (mup_values.empty()) throw ConfigError("grid: mup list is empty");
    if (di_values.empty()) throw ConfigError("grid: di list is empty");
    if (oracle.n == 0 || oracle.n > Coalition::kMaxMembers)
      throw ConfigError(fmt::format("oracle.n must be in [1, {}]", Coalition::kMaxMembers));
    for (double m : mup_values)
      if (!(m > 0.0)) throw ConfigError(fmt::format("grid: MUP must be > 0, got {}", m));
    for (double d : di_values)
      if (!(d >= 1.0)) throw ConfigError(fmt::format("grid: DI must be >= 1, got {}", d));
  }
  for (double t : tcod_values)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError(fmt::format("grid: TCOD must be > 0, got {}", t));
  for (double l : lambda_values)
    if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError(fmt::format("grid: lambda must be >= 0, got {}", l));
  for (const auto& s : strategies) s.config.validate();
}

InstanceFactory::InstanceFactory(OracleSpec oracle, VolumeSpec volumes, std::size_t shapley_samples,
                                 std::uint64_t base_seed)
    : spec_(std::move(oracle)), volumes_(volumes), shapley_samples_(shapley_samples), base_seed_(base_seed) {
  if (spec_.kind == OracleKind::table) {
    table_catalog_ = read_catalog_csv(spec_.catalog_path);
    table_ = std::make_shared<CoalitionTable>(load_table(spec_.table_path, table_catalog_->size()));
  }
}

std::size_t InstanceFactory::catalog_size() const noexcept {
  return table_catalog_ ? table_catalog_->size() : spec_.n;
}

std::uint64_t InstanceFactory::run_seed(const CellKey& cell, std::size_t repetition) const {
  SeedMix mix(base_seed_);
  mix.add(cell.tcod);
  if (spec_.kind == OracleKind::synthetic) mix.add(cell.mup).add(cell.di);
  return mix.add(to_string(cell.pricing)).add(std::uint64_t{repetition}).value();
}

std::shared_ptr<const AccuracyOracle> InstanceFactory::oracle_for(const CellKey& cell) const {
  if (table_) return table_;
  return std::make_shared<SyntheticOracle>(spec_.n, cell.mup, cell.di);
}

InstanceFactory::Instance InstanceFactory::make(const CellKey& cell, std::size_t repetition) const {
  const std::uint64_t seed = run_seed(cell, repetition);
  auto oracle = oracle_for(cell);
  const std::size_t n = catalog_size();

  std::vector<double> volumes =
      table_catalog_ ? table_catalog_->volumes()
                     : generate_volumes(volumes_, n, cell.di, SeedMix(seed).add(std::string_view("volumes")).value());
  const std::vector<Money> placeholder(n, 0.0);
  const auto unpriced = Catalog::from_prices(placeholder, volumes);

  PricingScheme scheme;
  scheme.kind = cell.pricing;
  scheme.tcod = cell.tcod;
  scheme.seed = SeedMix(seed).add(std::string_view("pricing")).value();
  scheme.shapley_samples = shapley_samples_;
  return Instance{oracle, apply_pricing(unpriced, scheme, *oracle, spec_.value_function), seed};
}

std::vector<StrategyConfig> expand_strategies(const std::vector<GridStrategy>& strategies,
                                              const std::vector<double>& lambda_values) {
  std::vector<StrategyConfig> out;
  for (const auto& s : strategies) {
    if (s.pin_lambda || s.config.kind == StrategyKind::optimal) {
      out.push_back(s.config);
      continue;
    }
    for (double l : lambda_values) {
      auto cfg = s.config;
      cfg.lambda = l;
      out.push_back(cfg);
    }
  }
  return out;
}

std::vector<std::string> size_limit_violations(const ExperimentGrid& grid) {
  std::vector<std::string> out;
  std::size_t n = grid.oracle.n;
  if (grid.oracle.kind == OracleKind::table) {
    // Table size is only known from the catalog file; the loader enforces its own limit.
    return out;
  }
  const bool wants_optimal = std::any_of(grid.strategies.begin(), grid.strategies.end(),
                                         [](const GridStrategy& s) { return s.config.kind == StrategyKind::optimal; });
  if (wants_optimal && n > kMaxOptimalDatasets)
    out.push_back(fmt::format("optimal strategy enumerates 2^N holdings and supports at most {} datasets; catalog has {}",
                              kMaxOptimalDatasets, n));
  const bool shapley_pricing =
      std::find(grid.pricing_kinds.begin(), grid.pricing_kinds.end(), PricingKind::shapley) != grid.pricing_kinds.end();
  if (shapley_pricing && grid.shapley_samples == 0 && n > kMaxExactShapleyPlayers)
    out.push_back(fmt::format("exact Shapley pricing supports at most {} datasets; catalog has {} (set pricing.shapley_samples)",
                              kMaxExactShapleyPlayers, n));
  return out;
}

GridResult run_grid(const ExperimentGrid& grid, std::size_t workers) {
  grid.validate();
  const InstanceFactory factory(grid.oracle, grid.volumes, grid.shapley_samples, grid.base_seed);
  const auto cells = enumerate_cells(grid);
  const auto strategies = expand_strategies(grid.strategies, grid.lambda_values);
  const std::size_t reps = grid.repetitions;
  const std::size_t n = factory.catalog_size();
  const bool optimal_feasible = n <= kMaxOptimalDatasets;
  const auto& vf = factory.value_function();

  std::vector<TaskResult> tasks(cells.size() * reps);
  parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto& cell = cells[t / reps];
    const std::size_t rep = t % reps;
    auto& out = tasks[t];
    try {
      const auto inst = factory.make(cell, rep);
      std::optional<PurchaseTrace> optimal;
      if (optimal_feasible) optimal = run_optimal(inst.catalog, *inst.oracle, vf);
      if (optimal) out.optimal_profit = optimal->final_profit;
      out.runs.reserve(strategies.size());
      for (const auto& cfg : strategies) {
        const auto trace = cfg.kind == StrategyKind::optimal && optimal
                               ? *optimal
                               : run_strategy(inst.catalog, *inst.oracle, vf, seeded_for_run(cfg, inst.run_seed));
        out.runs.push_back(RunOutcome{trace.final_profit, trace.queries, trace.rounds.size()});
      }
    } catch (const SizeLimitError& e) {
      out.error = e.what();
      out.size_limit = true;
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  GridResult result;
  const bool synthetic = grid.oracle.kind == OracleKind::synthetic;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto first = tasks.begin() + static_cast<std::ptrdiff_t>(c * reps);
    const auto last = first + static_cast<std::ptrdiff_t>(reps);
    const auto failed = std::find_if(first, last, [](const TaskResult& t) { return t.error.has_value(); });
    if (failed != last) {
      result.errors.push_back(
          CellError{cells[c], fmt::format("{}: {}", describe(cells[c], synthetic), *failed->error), failed->size_limit});
      continue;
    }
    const bool relative_defined = std::all_of(first, last, [](const TaskResult& t) {
      return t.optimal_profit && *t.optimal_profit > kRelativeProfitFloor;
    });
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      std::vector<double> profits, relative, queries, purchases;
      for (auto it = first; it != last; ++it) {
        const auto& run = it->runs[s];
        profits.push_back(run.profit);
        queries.push_back(static_cast<double>(run.queries));
        purchases.push_back(static_cast<double>(run.purchases));
        if (relative_defined) relative.push_back(run.profit / *it->optimal_profit);
      }
      ResultRow row;
      row.cell = cells[c];
      if (strategies[s].kind != StrategyKind::optimal) row.lambda = strategies[s].lambda;
      row.strategy = strategies[s].name();
      row.n_runs = reps;
      row.mean_profit = mean_of(profits);
      row.std_profit = sample_std(profits);
      if (relative_defined) row.mean_relative_profit = mean_of(relative);
      row.mean_queries = mean_of(queries);
      row.mean_purchases = mean_of(purchases);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_results_csv(std::ostream& out, const GridResult& result, bool synthetic) {
  out << "tcod,mup,di,pricing,lambda,strategy,n_runs,mean_profit,std_profit,mean_relative_profit,mean_queries,"
         "mean_purchases\n";
  for (const auto& r : result.rows) {
    out << csv::format_double(r.cell.tcod) << ',' << (synthetic ? csv::format_double(r.cell.mup) : "") << ','
        << (synthetic ? csv::format_double(r.cell.di) : "") << ',' << to_string(r.cell.pricing) << ','
        << optional_field(r.lambda) << ',' << r.strategy << ',' << r.n_runs << ',' << csv::format_double(r.mean_profit)
        << ',' << csv::format_double(r.std_profit) << ',' << optional_field(r.mean_relative_profit) << ','
        << csv::format_double(r.mean_queries) << ',' << csv::format_double(r.mean_purchases) << '\n';
  }
}

std::vector<SequencePoint> run_sequence(const InstanceFactory& factory, const CellKey& cell, std::size_t repetition,
                                        const std::vector<StrategyConfig>& strategies) {
  const auto inst = factory.make(cell, repetition);
  const auto& vf = factory.value_function();
  const std::size_t n = inst.catalog.size();
  std::vector<SequencePoint> out;
  for (const auto& cfg : strategies) {
    const auto trace = run_strategy(inst.catalog, *inst.oracle, vf, seeded_for_run(cfg, inst.run_seed));
    const std::string name = cfg.name();
    if (cfg.kind == StrategyKind::optimal) {
      out.push_back(SequencePoint{trace.rounds.size(), name, trace.final_profit});
      continue;
    }
    out.push_back(SequencePoint{0, name, trace.initial_profit});
    for (std::size_t k = 1; k <= n; ++k) {
      const Money p = k <= trace.rounds.size() ? trace.rounds[k - 1].cumulative_profit : trace.final_profit;
      out.push_back(SequencePoint{k, name, p});
    }
  }
  return out;
}

void write_sequence_csv(std::ostream& out, const std::vector<SequencePoint>& points) {
  out << "round,strategy,cum_profit\n";
  for (const auto& p : points) out << p.round << ',' << p.strategy << ',' << csv::format_double(p.cumulative_profit) << '\n';
}

} // namespace tbyb
