#include "tbyb/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tbyb/error.hpp"

namespace tbyb {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(fmt::format("`{}` must be an object", section));
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("unknown key `{}.{}`", section, key));
  }
}

double as_number(const json& v, std::string_view where) {
  if (!v.is_number()) throw ConfigError(fmt::format("`{}` must be a number", where));
  return v.get<double>();
}

std::uint64_t as_unsigned(const json& v, std::string_view where) {
  if (!v.is_number_unsigned()) throw ConfigError(fmt::format("`{}` must be a non-negative integer", where));
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, std::string_view where) {
  if (!v.is_string()) throw ConfigError(fmt::format("`{}` must be a string", where));
  return v.get<std::string>();
}

// A scalar or a non-empty list of scalars.
template <class T, class Convert>
std::vector<T> as_list(const json& v, std::string_view where, Convert convert) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(fmt::format("`{}` must not be empty", where));
    for (const auto& x : v) out.push_back(convert(x, where));
  } else {
    out.push_back(convert(v, where));
  }
  return out;
}

std::vector<double> number_list(const json& v, std::string_view where) { return as_list<double>(v, where, as_number); }

std::vector<PricingKind> pricing_list(const json& v, std::string_view where) {
  return as_list<PricingKind>(v, where, [](const json& x, std::string_view w) {
    const auto s = as_string(x, w);
    const auto k = parse_pricing_kind(s);
    if (!k) throw ConfigError(fmt::format("`{}`: unknown pricing kind `{}` (uniform|random|shapley|volume)", w, s));
    return *k;
  });
}

// Value from grid.<key> if present, else from <section>.<key>, else nullptr.
const json* pick(const json& doc, const std::string& section, const std::string& key, std::string& where) {
  if (doc.contains("grid") && doc["grid"].contains(key)) {
    where = "grid." + key;
    return &doc["grid"][key];
  }
  if (doc.contains(section) && doc[section].contains(key)) {
    where = section + "." + key;
    return &doc[section][key];
  }
  return nullptr;
}

ValueFunction parse_value_function(const json& v) {
  reject_unknown(v, "value_function", {"kind", "points"});
  const auto kind = v.contains("kind") ? as_string(v["kind"], "value_function.kind") : std::string("identity");
  if (kind == "identity") {
    if (v.contains("points")) throw ConfigError("`value_function.points` only applies to kind `table`");
    return ValueFunction::identity();
  }
  if (kind != "table") throw ConfigError(fmt::format("unknown value_function kind `{}` (identity|table)", kind));
  if (!v.contains("points") || !v["points"].is_array())
    throw ConfigError("`value_function.points` must be a list of [accuracy, value] pairs");
  std::vector<ValueFunction::Breakpoint> pts;
  for (const auto& p : v["points"]) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("each value_function point must be [accuracy, value]");
    pts.push_back({as_number(p[0], "value_function.points"), as_number(p[1], "value_function.points")});
  }
  return ValueFunction::table(std::move(pts));
}

GridStrategy parse_strategy(const json& v, std::size_t index) {
  const auto where = fmt::format("strategies[{}]", index);
  reject_unknown(v, where, {"kind", "lambda", "a_star", "query_budget", "seed", "label"});
  if (!v.contains("kind")) throw ConfigError(fmt::format("`{}.kind` is required", where));
  const auto name = as_string(v["kind"], where + ".kind");
  const auto kind = parse_strategy_kind(name);
  if (!kind)
    throw ConfigError(fmt::format(
        "`{}.kind`: unknown strategy `{}` (optimal|s_tbyb|a_tbyb|volume_heuristic|price_heuristic)", where, name));
  GridStrategy s;
  s.config.kind = *kind;
  if (v.contains("lambda")) {
    s.config.lambda = as_number(v["lambda"], where + ".lambda");
    s.pin_lambda = true;
  }
  if (v.contains("a_star")) s.config.a_star_override = as_number(v["a_star"], where + ".a_star");
  if (v.contains("query_budget")) s.config.query_budget = as_unsigned(v["query_budget"], where + ".query_budget");
  if (v.contains("seed")) s.config.seed = as_unsigned(v["seed"], where + ".seed");
  if (v.contains("label")) s.config.label = as_string(v["label"], where + ".label");
  s.config.validate();
  return s;
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("invalid JSON: {}", e.what()));
  }
  reject_unknown(doc, "config", {"oracle", "value_function", "pricing", "volumes", "strategies", "grid", "output"});
  if (doc.contains("pricing")) reject_unknown(doc["pricing"], "pricing", {"kind", "tcod", "seed", "shapley_samples"});
  if (doc.contains("grid"))
    reject_unknown(doc["grid"], "grid", {"tcod", "mup", "di", "pricing", "lambda", "repetitions", "base_seed"});

  ExperimentConfig cfg;
  auto& grid = cfg.grid;

  if (!doc.contains("oracle")) throw ConfigError("`oracle` section is required");
  const auto& oracle = doc["oracle"];
  reject_unknown(oracle, "oracle", {"kind", "n", "mup", "di", "table", "catalog"});
  const auto kind = oracle.contains("kind") ? as_string(oracle["kind"], "oracle.kind") : std::string("synthetic");
  std::string where;
  if (kind == "synthetic") {
    grid.oracle.kind = OracleKind::synthetic;
    if (oracle.contains("n")) grid.oracle.n = static_cast<std::size_t>(as_unsigned(oracle["n"], "oracle.n"));
    const json* mup = pick(doc, "oracle", "mup", where);
    if (!mup) throw ConfigError("synthetic oracle needs `oracle.mup` or `grid.mup`");
    grid.mup_values = number_list(*mup, where);
    const json* di = pick(doc, "oracle", "di", where);
    if (!di) throw ConfigError("synthetic oracle needs `oracle.di` or `grid.di`");
    grid.di_values = number_list(*di, where);
    if (oracle.contains("table") || oracle.contains("catalog"))
      throw ConfigError("`oracle.table` and `oracle.catalog` only apply to kind `table`");
  } else if (kind == "table") {
    grid.oracle.kind = OracleKind::table;
    if (!oracle.contains("table") || !oracle.contains("catalog"))
      throw ConfigError("table oracle needs `oracle.table` and `oracle.catalog`");
    grid.oracle.table_path = (base_dir / as_string(oracle["table"], "oracle.table")).string();
    grid.oracle.catalog_path = (base_dir / as_string(oracle["catalog"], "oracle.catalog")).string();
    for (auto key : {"n", "mup", "di"})
      if (oracle.contains(key)) throw ConfigError(fmt::format("`oracle.{}` only applies to kind `synthetic`", key));
  } else {
    throw ConfigError(fmt::format("unknown oracle kind `{}` (synthetic|table)", kind));
  }

  if (doc.contains("value_function")) grid.oracle.value_function = parse_value_function(doc["value_function"]);

  const json* tcod = pick(doc, "pricing", "tcod", where);
  if (!tcod) throw ConfigError("`pricing.tcod` or `grid.tcod` is required");
  grid.tcod_values = number_list(*tcod, where);

  if (doc.contains("grid") && doc["grid"].contains("pricing"))
    grid.pricing_kinds = pricing_list(doc["grid"]["pricing"], "grid.pricing");
  else if (doc.contains("pricing") && doc["pricing"].contains("kind"))
    grid.pricing_kinds = pricing_list(doc["pricing"]["kind"], "pricing.kind");
  else
    grid.pricing_kinds = {PricingKind::uniform};

  if (doc.contains("pricing")) {
    const auto& p = doc["pricing"];
    if (p.contains("seed")) grid.base_seed = as_unsigned(p["seed"], "pricing.seed");
    if (p.contains("shapley_samples"))
      grid.shapley_samples = static_cast<std::size_t>(as_unsigned(p["shapley_samples"], "pricing.shapley_samples"));
  }

  if (doc.contains("volumes")) {
    const auto& v = doc["volumes"];
    reject_unknown(v, "volumes", {"kind", "sigma"});
    if (v.contains("kind")) {
      const auto s = as_string(v["kind"], "volumes.kind");
      const auto k = parse_volume_kind(s);
      if (!k) throw ConfigError(fmt::format("unknown volumes kind `{}` (uniform|importance)", s));
      grid.volumes.kind = *k;
    }
    if (v.contains("sigma")) {
      grid.volumes.sigma = as_number(v["sigma"], "volumes.sigma");
      if (!(grid.volumes.sigma >= 0.0)) throw ConfigError("`volumes.sigma` must be >= 0");
    }
  }

  if (doc.contains("strategies")) {
    const auto& list = doc["strategies"];
    if (!list.is_array() || list.empty()) throw ConfigError("`strategies` must be a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) grid.strategies.push_back(parse_strategy(list[i], i));
  } else {
    for (auto k : {StrategyKind::optimal, StrategyKind::a_tbyb, StrategyKind::s_tbyb, StrategyKind::volume_heuristic,
                   StrategyKind::price_heuristic})
      grid.strategies.push_back(GridStrategy{StrategyConfig{.kind = k}, false});
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (g.contains("lambda")) grid.lambda_values = number_list(g["lambda"], "grid.lambda");
    if (g.contains("repetitions"))
      grid.repetitions = static_cast<std::size_t>(as_unsigned(g["repetitions"], "grid.repetitions"));
    if (g.contains("base_seed")) grid.base_seed = as_unsigned(g["base_seed"], "grid.base_seed");
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, "output", {"experiment", "sequence", "manifest"});
    if (o.contains("experiment")) cfg.experiment_file = as_string(o["experiment"], "output.experiment");
    if (o.contains("sequence")) cfg.sequence_file = as_string(o["sequence"], "output.sequence");
    if (o.contains("manifest")) cfg.manifest_file = as_string(o["manifest"], "output.manifest");
  }

  grid.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return parse_config(text, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

} // namespace tbyb
