#include "tbyb/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "tbyb/csv.hpp"
#include "tbyb/error.hpp"

namespace tbyb {

std::vector<DatasetId> Coalition::members() const {
  std::vector<DatasetId> out;
  out.reserve(size());
  for_each([&](DatasetId id) { out.push_back(id); });
  return out;
}

Catalog::Catalog(std::vector<Dataset> datasets) : datasets_(std::move(datasets)) {
  if (datasets_.empty()) throw ConfigError("catalog must contain at least one dataset");
  if (datasets_.size() > Coalition::kMaxMembers)
    throw SizeLimitError(fmt::format("catalog has {} datasets; at most {} are supported", datasets_.size(),
                                     Coalition::kMaxMembers));
  for (std::size_t i = 0; i < datasets_.size(); ++i) {
    const auto& d = datasets_[i];
    if (d.id.index != i) throw ConfigError(fmt::format("dataset ids must be 0..N-1 in order; found {} at position {}", d.id.index, i));
    if (!(d.price >= 0.0) || !std::isfinite(d.price))
      throw ConfigError(fmt::format("dataset {}: price must be a finite value >= 0", i));
    if (!(d.volume >= 0.0) || !std::isfinite(d.volume))
      throw ConfigError(fmt::format("dataset {}: volume must be a finite value >= 0", i));
  }
}

Catalog Catalog::from_prices(std::span<const Money> prices, std::span<const double> volumes) {
  if (!volumes.empty() && volumes.size() != prices.size())
    throw ConfigError("price and volume lists differ in length");
  std::vector<Dataset> ds;
  ds.reserve(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i)
    ds.push_back(Dataset{DatasetId{i}, prices[i], volumes.empty() ? 0.0 : volumes[i]});
  return Catalog(std::move(ds));
}

std::vector<Money> Catalog::prices() const {
  std::vector<Money> out;
  out.reserve(size());
  for (const auto& d : datasets_) out.push_back(d.price);
  return out;
}

std::vector<double> Catalog::volumes() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& d : datasets_) out.push_back(d.volume);
  return out;
}

Catalog Catalog::with_prices(std::span<const Money> prices) const {
  if (prices.size() != size()) throw ConfigError("price list does not match catalog size");
  auto ds = datasets_;
  for (std::size_t i = 0; i < ds.size(); ++i) ds[i].price = prices[i];
  return Catalog(std::move(ds));
}

Money Catalog::price_of(Coalition c) const {
  Money total = 0.0;
  c.for_each([&](DatasetId id) { total += datasets_.at(id.index).price; });
  return total;
}

bool operator==(const Catalog& a, const Catalog& b) {
  return std::equal(a.datasets_.begin(), a.datasets_.end(), b.datasets_.begin(), b.datasets_.end(),
                    [](const Dataset& x, const Dataset& y) {
                      return x.id == y.id && x.price == y.price && x.volume == y.volume;
                    });
}

Money tcod(const Catalog& catalog) { return catalog.price_of(catalog.all()); }

Catalog read_catalog_csv(std::istream& in) {
  const auto table = csv::read(in);
  const auto id_col = table.column("id");
  const auto price_col = table.column("price");
  const auto volume_col = table.column("volume");
  if (!id_col || !price_col || !volume_col) throw ConfigError("catalog CSV header must be `id,price,volume`");
  std::vector<Dataset> ds;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.line_numbers[r];
    const auto id = csv::parse_u64(row[*id_col]);
    const auto price = csv::parse_double(row[*price_col]);
    const auto volume = csv::parse_double(row[*volume_col]);
    if (!id || !price || !volume) throw ConfigError(fmt::format("catalog line {}: malformed row", line));
    ds.push_back(Dataset{DatasetId{static_cast<std::size_t>(*id)}, *price, *volume});
  }
  return Catalog(std::move(ds));
}

Catalog read_catalog_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open catalog file '{}'", path));
  try {
    return read_catalog_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void write_catalog_csv(std::ostream& out, const Catalog& catalog) {
  out << "id,price,volume\n";
  for (const auto& d : catalog.datasets())
    out << d.id.index << ',' << csv::format_double(d.price) << ',' << csv::format_double(d.volume) << '\n';
}

ValueFunction ValueFunction::table(std::vector<Breakpoint> points) {
  if (points.empty()) throw ConfigError("value function table needs at least one breakpoint");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.accuracy >= 0.0 && p.accuracy <= 1.0)) throw ConfigError("value function breakpoints must lie in [0,1]");
    if (!std::isfinite(p.value)) throw ConfigError("value function values must be finite");
    if (i > 0) {
      if (!(p.accuracy > points[i - 1].accuracy))
        throw ConfigError("value function breakpoints must have strictly increasing accuracy");
      if (p.value < points[i - 1].value) throw ConfigError("value function must be nondecreasing");
    }
  }
  if (points.front().value < 0.0) throw ConfigError("value function must satisfy v(0) >= 0");
  ValueFunction vf;
  vf.points_ = std::move(points);
  return vf;
}

Money ValueFunction::operator()(Accuracy a) const {
  if (points_.empty()) return a;
  if (a <= points_.front().accuracy) return points_.front().value;
  if (a >= points_.back().accuracy) return points_.back().value;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), a,
                                   [](Accuracy x, const Breakpoint& p) { return x < p.accuracy; });
  const auto lo = hi - 1;
  const double t = (a - lo->accuracy) / (hi->accuracy - lo->accuracy);
  return lo->value + t * (hi->value - lo->value);
}

FunctionOracle::FunctionOracle(std::size_t n, std::function<Accuracy(Coalition)> fn)
    : n_(n), fn_(std::move(fn)), max_(fn_(Coalition::full(n))) {}

PurchaseState PurchaseState::initial(const Catalog& catalog, const ValueFunction& vf) {
  PurchaseState s;
  s.remaining = catalog.all();
  s.value = vf(0.0);
  return s;
}

void PurchaseState::buy(const Dataset& d, Accuracy new_accuracy, const ValueFunction& vf) {
  owned = owned.with(d.id);
  remaining = remaining.without(d.id);
  previous_accuracy = accuracy;
  accuracy = new_accuracy;
  value = vf(new_accuracy);
  spent += d.price;
  ++round;
}

Money profit(const PurchaseState& state, const ValueFunction& vf) { return vf(state.accuracy) - state.spent; }

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::no_candidate: return "no_candidate";
    case StopReason::condition_failed: return "condition_failed";
    case StopReason::catalog_exhausted: return "catalog_exhausted";
    case StopReason::query_budget_exhausted: return "query_budget_exhausted";
  }
  return "unknown";
}

std::optional<std::string> verify_trace(const PurchaseTrace& trace, const Catalog& catalog,
                                        const AccuracyOracle& oracle, const ValueFunction& vf) {
  Coalition owned;
  Money spent = 0.0;
  const Money initial = vf(oracle.accuracy(owned));
  if (trace.initial_profit != initial)
    return fmt::format("initial profit {} != replayed {}", trace.initial_profit, initial);
  Money last = initial;
  for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
    const auto& r = trace.rounds[k];
    if (r.round != k + 1) return fmt::format("round {} recorded with index {}", k + 1, r.round);
    if (r.bought.index >= catalog.size()) return fmt::format("round {}: dataset {} outside catalog", r.round, r.bought.index);
    if (owned.contains(r.bought)) return fmt::format("round {}: dataset {} bought twice", r.round, r.bought.index);
    if (r.price != catalog[r.bought].price) return fmt::format("round {}: price {} != catalog price", r.round, r.price);
    owned = owned.with(r.bought);
    spent += r.price;
    const Accuracy a = oracle.accuracy(owned);
    if (a != r.accuracy_after) return fmt::format("round {}: accuracy {} != replayed {}", r.round, r.accuracy_after, a);
    const Money p = vf(a) - spent;
    if (p != r.cumulative_profit)
      return fmt::format("round {}: cumulative profit {} != replayed {}", r.round, r.cumulative_profit, p);
    last = p;
  }
  if (owned != trace.owned) return std::string("final holding does not match purchased datasets");
  if (trace.final_profit != last) return fmt::format("final profit {} != replayed {}", trace.final_profit, last);
  return std::nullopt;
}

} // namespace tbyb
