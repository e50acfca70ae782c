#pragma once
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tbyb {

using Money = double;
using Accuracy = double;

struct DatasetId {
  std::size_t index = 0;

  friend constexpr auto operator<=>(DatasetId, DatasetId) = default;
};

struct Dataset {
  DatasetId id;
  Money price = 0.0;
  double volume = 0.0;
};

// Set of datasets as a bitmask; bit i <=> DatasetId{i}.
class Coalition {
public:
  static constexpr std::size_t kMaxMembers = 64;

  constexpr Coalition() = default;
  static constexpr Coalition from_mask(std::uint64_t mask) noexcept { return Coalition(mask); }
  static constexpr Coalition full(std::size_t n) noexcept {
    return Coalition(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr Coalition single(DatasetId id) noexcept { return Coalition(bit(id)); }

  constexpr std::uint64_t mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(DatasetId id) const noexcept { return (mask_ & bit(id)) != 0; }
  constexpr bool subset_of(Coalition other) const noexcept { return (mask_ & ~other.mask_) == 0; }

  constexpr Coalition with(DatasetId id) const noexcept { return Coalition(mask_ | bit(id)); }
  constexpr Coalition without(DatasetId id) const noexcept { return Coalition(mask_ & ~bit(id)); }
  constexpr Coalition operator|(Coalition o) const noexcept { return Coalition(mask_ | o.mask_); }
  constexpr Coalition operator&(Coalition o) const noexcept { return Coalition(mask_ & o.mask_); }

  // Visits members in ascending id order.
  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) f(DatasetId{static_cast<std::size_t>(std::countr_zero(m))});
  }
  std::vector<DatasetId> members() const;

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

private:
  explicit constexpr Coalition(std::uint64_t mask) noexcept : mask_(mask) {}
  static constexpr std::uint64_t bit(DatasetId id) noexcept { return std::uint64_t{1} << id.index; }

  std::uint64_t mask_ = 0;
};

class Catalog {
public:
  // Throws ConfigError unless ids are 0..N-1 in order, 1 <= N <= 64, prices and volumes >= 0.
  explicit Catalog(std::vector<Dataset> datasets);

  static Catalog from_prices(std::span<const Money> prices, std::span<const double> volumes = {});

  std::size_t size() const noexcept { return datasets_.size(); }
  const Dataset& operator[](DatasetId id) const { return datasets_.at(id.index); }
  const std::vector<Dataset>& datasets() const noexcept { return datasets_; }
  std::vector<Money> prices() const;
  std::vector<double> volumes() const;
  Coalition all() const noexcept { return Coalition::full(size()); }

  Catalog with_prices(std::span<const Money> prices) const;

  // Sum of prices in ascending id order.
  Money price_of(Coalition c) const;

  friend bool operator==(const Catalog& a, const Catalog& b);

private:
  std::vector<Dataset> datasets_;
};

Money tcod(const Catalog& catalog);

// CSV with header `id,price,volume`.
Catalog read_catalog_csv(std::istream& in);
Catalog read_catalog_csv(const std::string& path);
void write_catalog_csv(std::ostream& out, const Catalog& catalog);

// Monetary value of an accuracy level. Identity by default; otherwise a
// nondecreasing piecewise-linear curve, held constant outside its breakpoints.
class ValueFunction {
public:
  struct Breakpoint {
    Accuracy accuracy;
    Money value;
  };

  ValueFunction() = default;
  static ValueFunction identity() { return {}; }
  // Breakpoints must have strictly increasing accuracy in [0,1], nondecreasing
  // value, and v(0) >= 0.
  static ValueFunction table(std::vector<Breakpoint> points);

  Money operator()(Accuracy a) const;
  bool is_identity() const noexcept { return points_.empty(); }
  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

private:
  std::vector<Breakpoint> points_;
};

// Accuracy achievable from any coalition of a catalog's datasets.
// Implementations guarantee accuracy(empty) == 0, monotonicity under inclusion,
// and accuracy(S) <= max_accuracy(). Evaluation must be const and thread-safe.
class AccuracyOracle {
public:
  virtual ~AccuracyOracle() = default;
  virtual std::size_t size() const = 0;
  virtual Accuracy accuracy(Coalition c) const = 0;
  virtual Accuracy max_accuracy() const = 0;
};

// Run-local query accounting over a shared oracle.
class OracleSession {
public:
  explicit OracleSession(const AccuracyOracle& oracle) noexcept : oracle_(&oracle) {}

  Accuracy query(Coalition c) {
    ++queries_;
    return oracle_->accuracy(c);
  }
  std::uint64_t queries() const noexcept { return queries_; }
  const AccuracyOracle& oracle() const noexcept { return *oracle_; }

private:
  const AccuracyOracle* oracle_;
  std::uint64_t queries_ = 0;
};

// Oracle backed by a callable. The callable is trusted to satisfy the oracle contract.
class FunctionOracle final : public AccuracyOracle {
public:
  FunctionOracle(std::size_t n, std::function<Accuracy(Coalition)> fn);

  std::size_t size() const override { return n_; }
  Accuracy accuracy(Coalition c) const override { return fn_(c); }
  Accuracy max_accuracy() const override { return max_; }

private:
  std::size_t n_;
  std::function<Accuracy(Coalition)> fn_;
  Accuracy max_;
};

struct PurchaseState {
  Coalition owned;
  Coalition remaining;
  Accuracy accuracy = 0.0;
  Accuracy previous_accuracy = 0.0;
  Money value = 0.0;
  Money spent = 0.0;
  std::size_t round = 0;

  static PurchaseState initial(const Catalog& catalog, const ValueFunction& vf);
  void buy(const Dataset& d, Accuracy new_accuracy, const ValueFunction& vf);
};

// v(a_n) - spent; negative when the buyer is at a loss.
Money profit(const PurchaseState& state, const ValueFunction& vf);

enum class StopReason { no_candidate, condition_failed, catalog_exhausted, query_budget_exhausted };

std::string_view to_string(StopReason r) noexcept;

struct PurchaseRound {
  std::size_t round = 0; // 1-based
  DatasetId bought;
  Money price = 0.0;
  Accuracy accuracy_after = 0.0;
  Money cumulative_profit = 0.0;
};

struct PurchaseTrace {
  std::vector<PurchaseRound> rounds;
  Coalition owned;
  Money initial_profit = 0.0;
  Money final_profit = 0.0;
  StopReason stop_reason = StopReason::no_candidate;
  std::uint64_t queries = 0;
  // Rounds in which a buy decision was evaluated, including the one that stopped the run.
  std::size_t decision_rounds = 0;
};

// Replays purchases against the oracle and checks every recorded accuracy and
// cumulative profit for exact equality. Returns a description of the first mismatch.
std::optional<std::string> verify_trace(const PurchaseTrace& trace, const Catalog& catalog,
                                        const AccuracyOracle& oracle, const ValueFunction& vf);

} // namespace tbyb
