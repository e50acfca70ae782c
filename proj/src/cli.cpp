#include "tbyb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tbyb/config.hpp"
#include "tbyb/error.hpp"
#include "tbyb/harness.hpp"
#include "tbyb/plot.hpp"
#include "tbyb/shapley.hpp"
#include "tbyb/synthetic_oracle.hpp"
#include "tbyb/table_oracle.hpp"

namespace tbyb {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::string out_dir = ".";
};

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw IoError(fmt::format("error writing '{}'", path.string()));
}

ExperimentConfig load_with_overrides(const std::string& path, const GlobalOptions& g) {
  auto cfg = load_config(path);
  if (g.seed) cfg.grid.base_seed = *g.seed;
  return cfg;
}

int report_limits(const ExperimentGrid& grid, std::ostream& err) {
  const auto problems = size_limit_violations(grid);
  for (const auto& p : problems) err << "size limit: " << p << '\n';
  return problems.empty() ? kExitOk : kExitSizeLimit;
}

int cmd_sweep(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const auto cfg = load_with_overrides(config_path, g);
  if (const int rc = report_limits(cfg.grid, err); rc != kExitOk) return rc;

  const auto result = run_grid(cfg.grid, g.workers);
  const bool synthetic = cfg.grid.oracle.kind == OracleKind::synthetic;
  std::ostringstream csv;
  write_results_csv(csv, result, synthetic);
  const fs::path dir(g.out_dir);
  write_text(dir / cfg.experiment_file, csv.str());

  nlohmann::json manifest;
  manifest["tool"] = "tbyb";
  manifest["version"] = kToolVersion;
  manifest["config"] = fs::path(config_path).filename().string();
  manifest["config_fnv1a64"] = fnv1a_hex(read_file(config_path));
  manifest["base_seed"] = cfg.grid.base_seed;
  manifest["repetitions"] = cfg.grid.repetitions;
  manifest["rows"] = result.rows.size();
  manifest["experiment_csv"] = cfg.experiment_file;
  manifest["experiment_fnv1a64"] = fnv1a_hex(csv.str());
  auto errors = nlohmann::json::array();
  for (const auto& e : result.errors) errors.push_back(e.message);
  manifest["cell_errors"] = errors;
  write_text(dir / cfg.manifest_file, manifest.dump(2) + "\n");

  out << fmt::format("wrote {} rows to {}\n", result.rows.size(), (dir / cfg.experiment_file).string());
  if (result.errors.empty()) return kExitOk;
  bool size_limit = false;
  for (const auto& e : result.errors) {
    err << "cell error: " << e.message << '\n';
    size_limit = size_limit || e.size_limit;
  }
  return size_limit ? kExitSizeLimit : kExitConfig;
}

struct SequenceOptions {
  std::optional<double> tcod, mup, di, lambda;
  std::optional<std::string> pricing;
  std::size_t repetition = 0;
};

int cmd_sequence(const std::string& config_path, const SequenceOptions& o, const GlobalOptions& g, std::ostream& out,
                 std::ostream& err) {
  const auto cfg = load_with_overrides(config_path, g);
  const auto& grid = cfg.grid;
  if (const int rc = report_limits(grid, err); rc != kExitOk) return rc;

  CellKey cell;
  cell.tcod = o.tcod.value_or(grid.tcod_values.front());
  if (grid.oracle.kind == OracleKind::synthetic) {
    cell.mup = o.mup.value_or(grid.mup_values.front());
    cell.di = o.di.value_or(grid.di_values.front());
  } else {
    cell.mup = cell.di = 0.0;
  }
  cell.pricing = grid.pricing_kinds.front();
  if (o.pricing) {
    const auto k = parse_pricing_kind(*o.pricing);
    if (!k) throw ConfigError(fmt::format("unknown pricing kind `{}`", *o.pricing));
    cell.pricing = *k;
  }
  const double lambda = o.lambda.value_or(grid.lambda_values.front());
  if (!(lambda >= 0.0)) throw ConfigError("--lambda must be >= 0");

  const InstanceFactory factory(grid.oracle, grid.volumes, grid.shapley_samples, grid.base_seed);
  const auto points = run_sequence(factory, cell, o.repetition, expand_strategies(grid.strategies, {lambda}));
  std::ostringstream csv;
  write_sequence_csv(csv, points);
  const auto path = fs::path(g.out_dir) / cfg.sequence_file;
  write_text(path, csv.str());
  out << fmt::format("wrote {} points to {}\n", points.size(), path.string());
  return kExitOk;
}

struct ShapleyOptions {
  std::optional<std::string> config;
  std::string oracle; // table when --table is given, synthetic otherwise
  std::size_t n = 10;
  double mup = 1.0;
  double di = 1.0;
  std::string table;
  std::string catalog;
  std::string method = "exact";
  std::size_t samples = 1000;
  std::optional<std::string> output;
};

int cmd_shapley(ShapleyOptions o, const GlobalOptions& g, std::ostream& out) {
  ValueFunction vf;
  if (o.config) {
    const auto cfg = load_config(*o.config);
    const auto& spec = cfg.grid.oracle;
    vf = spec.value_function;
    if (spec.kind == OracleKind::synthetic) {
      o.oracle = "synthetic";
      o.n = spec.n;
      o.mup = cfg.grid.mup_values.front();
      o.di = cfg.grid.di_values.front();
    } else {
      o.oracle = "table";
      o.table = spec.table_path;
      o.catalog = spec.catalog_path;
    }
  }

  if (o.oracle.empty()) o.oracle = o.table.empty() ? "synthetic" : "table";
  std::unique_ptr<AccuracyOracle> oracle;
  if (o.oracle == "synthetic") {
    if (!o.table.empty()) throw ConfigError("--table only applies to --oracle table");
    if (!o.catalog.empty()) o.n = read_catalog_csv(o.catalog).size();
    oracle = std::make_unique<SyntheticOracle>(o.n, o.mup, o.di);
  } else if (o.oracle == "table") {
    if (o.table.empty() || o.catalog.empty()) throw ConfigError("table oracle needs --table and --catalog");
    oracle = std::make_unique<CoalitionTable>(load_table(o.table, read_catalog_csv(o.catalog).size()));
  } else {
    throw ConfigError(fmt::format("unknown oracle kind `{}` (synthetic|table)", o.oracle));
  }

  ShapleyResult result;
  if (o.method == "exact") {
    result = shapley_exact(*oracle, vf, g.workers);
  } else if (o.method == "mc" || o.method == "monte_carlo") {
    if (o.samples == 0) throw ConfigError("--samples must be >= 1");
    result = shapley_monte_carlo(*oracle, vf, o.samples, g.seed.value_or(0), g.workers);
  } else {
    throw ConfigError(fmt::format("unknown method `{}` (exact|mc)", o.method));
  }

  std::ostringstream csv;
  csv << "id,shapley,std_error\n";
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    csv << i << ',' << csv::format_double(result.values[i]) << ',';
    if (!result.std_error.empty()) csv << csv::format_double(result.std_error[i]);
    csv << '\n';
  }
  if (o.output)
    write_text(*o.output, csv.str());
  else
    out << csv.str();
  return kExitOk;
}

int cmd_plot(const std::string& input, PlotSpec spec, const std::vector<std::string>& filters,
             const std::string& output, std::ostream& out) {
  for (const auto& f : filters) {
    const auto eq = f.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("--filter expects column=value, got `{}`", f));
    spec.filters.emplace_back(f.substr(0, eq), f.substr(eq + 1));
  }
  std::ifstream in(input);
  if (!in) throw IoError(fmt::format("cannot open '{}'", input));
  csv::Table table;
  try {
    table = csv::read(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: no data rows ({})", input, e.what()));
  }
  const auto svg = render_plot_svg(table, spec);
  write_text(output, svg);
  out << fmt::format("wrote {}\n", output);
  return kExitOk;
}

int cmd_validate(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const auto cfg = load_with_overrides(config_path, g);
  const auto& grid = cfg.grid;
  if (const int rc = report_limits(grid, err); rc != kExitOk) return rc;
  // Loads table-backed oracles so file and size problems surface here.
  const InstanceFactory factory(grid.oracle, grid.volumes, grid.shapley_samples, grid.base_seed);
  const std::size_t cells = (grid.oracle.kind == OracleKind::synthetic ? grid.mup_values.size() * grid.di_values.size() : 1) *
                            grid.pricing_kinds.size() * grid.tcod_values.size();
  const auto strategies = expand_strategies(grid.strategies, grid.lambda_values);
  if (factory.catalog_size() > kMaxOptimalDatasets) {
    for (const auto& s : strategies)
      if (s.kind == StrategyKind::optimal) {
        err << fmt::format("size limit: optimal strategy supports at most {} datasets\n", kMaxOptimalDatasets);
        return kExitSizeLimit;
      }
  }
  out << fmt::format("ok: {} datasets, {} cells x {} repetitions x {} strategy runs\n", factory.catalog_size(), cells,
                     grid.repetitions, strategies.size());
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data purchasing strategies for data marketplaces", "tbyb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base seed (overrides the config)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_dir, "Output directory");

  std::string config_path;

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write experiment.csv + manifest.json");
  sweep->fallthrough();
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();

  SequenceOptions seq;
  auto* sequence = app.add_subcommand("sequence", "Write per-round cumulative profit for one instance");
  sequence->fallthrough();
  sequence->add_option("config", config_path, "Experiment config (JSON)")->required();
  sequence->add_option("--tcod", seq.tcod, "TCOD (default: first grid value)");
  sequence->add_option("--mup", seq.mup, "MUP (default: first grid value)");
  sequence->add_option("--di", seq.di, "DI (default: first grid value)");
  sequence->add_option("--pricing", seq.pricing, "Pricing kind (default: first grid value)");
  sequence->add_option("--lambda", seq.lambda, "Risk parameter for unpinned strategies");
  sequence->add_option("--rep", seq.repetition, "Repetition index selecting the instance seed");

  ShapleyOptions sh;
  auto* shapley = app.add_subcommand("shapley", "Shapley values of datasets; writes id,shapley,std_error");
  shapley->fallthrough();
  shapley->add_option("--config", sh.config, "Take the oracle from an experiment config");
  shapley->add_option("--oracle", sh.oracle, "synthetic|table (default: table when --table is given)");
  shapley->add_option("--n", sh.n, "Synthetic catalog size");
  shapley->add_option("--mup", sh.mup, "Synthetic MUP");
  shapley->add_option("--di", sh.di, "Synthetic DI");
  shapley->add_option("--table", sh.table, "Coalition accuracy table CSV");
  shapley->add_option("--catalog", sh.catalog, "Catalog CSV (id,price,volume)");
  shapley->add_option("--method", sh.method, "exact|mc");
  shapley->add_option("--samples", sh.samples, "Monte Carlo permutations");
  shapley->add_option("--output", sh.output, "Output CSV (stdout if omitted)");

  PlotSpec plot_spec;
  std::string plot_input, plot_output;
  std::vector<std::string> plot_filters;
  std::string facet;
  auto* plot = app.add_subcommand("plot", "Render a CSV as an SVG line chart");
  plot->fallthrough();
  plot->add_option("input", plot_input, "Input CSV")->required();
  plot->add_option("--x", plot_spec.x, "x column (tcod|round)");
  plot->add_option("--y", plot_spec.y, "y column (mean_profit|mean_relative_profit|cum_profit)");
  plot->add_option("--series", plot_spec.series, "Series column");
  plot->add_option("--facet", facet, "One panel per value of this column");
  plot->add_option("--filter", plot_filters, "Keep rows with column=value (repeatable)");
  plot->add_option("--title", plot_spec.title, "Chart title");
  plot->add_option("--output,-o", plot_output, "Output SVG")->required();

  auto* validate = app.add_subcommand("validate-config", "Check a config without running it");
  validate->fallthrough();
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, g, out, err);
    if (sequence->parsed()) return cmd_sequence(config_path, seq, g, out, err);
    if (shapley->parsed()) return cmd_shapley(sh, g, out);
    if (plot->parsed()) {
      if (!facet.empty()) plot_spec.facet = facet;
      return cmd_plot(plot_input, plot_spec, plot_filters, plot_output, out);
    }
    if (validate->parsed()) return cmd_validate(config_path, g, out, err);
  } catch (const SizeLimitError& e) {
    err << "size limit: " << e.what() << '\n';
    return kExitSizeLimit;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

} // namespace tbyb
