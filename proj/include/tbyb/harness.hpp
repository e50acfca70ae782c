#pragma once
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tbyb/catalog.hpp"
#include "tbyb/pricing.hpp"
#include "tbyb/strategies.hpp"
#include "tbyb/table_oracle.hpp"

namespace tbyb {

enum class OracleKind { synthetic, table };

struct OracleSpec {
  OracleKind kind = OracleKind::synthetic;
  std::size_t n = 10; // synthetic catalog size; taken from the catalog file for tables
  std::string table_path;
  std::string catalog_path;
  ValueFunction value_function;
};

// A strategy as listed in an experiment. Unless its lambda is pinned, it runs
// once per grid lambda value.
struct GridStrategy {
  StrategyConfig config;
  bool pin_lambda = false;
};

struct ExperimentGrid {
  OracleSpec oracle;
  std::vector<double> tcod_values;
  std::vector<double> mup_values;
  std::vector<double> di_values;
  std::vector<PricingKind> pricing_kinds;
  std::vector<double> lambda_values{kDefaultLambda};
  std::vector<GridStrategy> strategies;
  std::size_t repetitions = 50;
  std::uint64_t base_seed = 0;
  VolumeSpec volumes;
  std::size_t shapley_samples = 0; // 0: exact Shapley pricing

  // Throws ConfigError on empty dimensions, repetitions < 1 or invalid strategy parameters.
  void validate() const;
};

// One priced instance coordinate. For table oracles mup and di are unused.
struct CellKey {
  double tcod = 1.0;
  double mup = 1.0;
  double di = 1.0;
  PricingKind pricing = PricingKind::uniform;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct ResultRow {
  CellKey cell;
  std::optional<double> lambda; // empty for the optimal strategy
  std::string strategy;
  std::size_t n_runs = 0;
  Money mean_profit = 0.0;
  Money std_profit = 0.0;
  // Per-run profit / optimal profit, averaged; present only when the optimal
  // profit exceeds 1e-9 on every run of the cell.
  std::optional<double> mean_relative_profit;
  double mean_queries = 0.0;
  double mean_purchases = 0.0;
};

struct CellError {
  CellKey cell;
  std::string message;
  bool size_limit = false;
};

struct GridResult {
  std::vector<ResultRow> rows;
  std::vector<CellError> errors;
};

// Builds the priced catalog and oracle for (cell, repetition). Volumes, prices
// and heuristic randomness derive from a seed mixed from the base seed, the
// cell coordinates and the repetition, so every strategy in a cell sees the
// same instance and adding grid points leaves existing cells unchanged.
class InstanceFactory {
public:
  struct Instance {
    std::shared_ptr<const AccuracyOracle> oracle;
    Catalog catalog;
    std::uint64_t run_seed = 0;
  };

  InstanceFactory(OracleSpec oracle, VolumeSpec volumes, std::size_t shapley_samples, std::uint64_t base_seed);

  std::size_t catalog_size() const noexcept;
  const ValueFunction& value_function() const noexcept { return spec_.value_function; }
  bool uses_synthetic_model() const noexcept { return spec_.kind == OracleKind::synthetic; }

  std::uint64_t run_seed(const CellKey& cell, std::size_t repetition) const;
  Instance make(const CellKey& cell, std::size_t repetition) const;

private:
  std::shared_ptr<const AccuracyOracle> oracle_for(const CellKey& cell) const;

  OracleSpec spec_;
  VolumeSpec volumes_;
  std::size_t shapley_samples_;
  std::uint64_t base_seed_;
  std::shared_ptr<const CoalitionTable> table_;
  std::optional<Catalog> table_catalog_;
};

// Size-limit problems of a grid (optimal above 24 datasets, exact Shapley
// pricing above 20). Empty when every cell can run.
std::vector<std::string> size_limit_violations(const ExperimentGrid& grid);

// Every cell x repetition x strategy. Cells failing a size limit or pricing
// precondition are reported in `errors`; the rest still run. Output is
// independent of the worker count.
GridResult run_grid(const ExperimentGrid& grid, std::size_t workers = 1);

void write_results_csv(std::ostream& out, const GridResult& result, bool synthetic);

struct SequencePoint {
  std::size_t round = 0;
  std::string strategy;
  Money cumulative_profit = 0.0;
};

// Cumulative profit after each round for one instance. Sequential strategies
// emit rounds 0..N, padded with their final profit after stopping; the
// optimal strategy emits a single point at the size of its holding.
std::vector<SequencePoint> run_sequence(const InstanceFactory& factory, const CellKey& cell, std::size_t repetition,
                                        const std::vector<StrategyConfig>& strategies);

void write_sequence_csv(std::ostream& out, const std::vector<SequencePoint>& points);

// Strategies of a grid with lambda resolved: pinned ones as given, the others per grid lambda.
std::vector<StrategyConfig> expand_strategies(const std::vector<GridStrategy>& strategies,
                                              const std::vector<double>& lambda_values);

} // namespace tbyb
