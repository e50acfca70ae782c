#pragma once
#include <cstddef>
#include <vector>

#include "tbyb/catalog.hpp"

namespace tbyb {

// Parametric accuracy model: a(S) = (sum_{i in S} DI^(i+1) / sum_all DI^(i+1))^MUP.
//
// MUP < 1 gives diminishing returns in the weight fraction, MUP > 1 increasing
// returns. DI = 1 makes datasets interchangeable; with DI > 1 each dataset
// weighs DI times the one before it. The full catalog always reaches 1.
class SyntheticOracle final : public AccuracyOracle {
public:
  // Throws ConfigError unless 1 <= n <= 64, mup > 0 and di >= 1.
  SyntheticOracle(std::size_t n, double mup, double di);

  std::size_t size() const override { return weights_.size(); }
  Accuracy accuracy(Coalition c) const override;
  Accuracy max_accuracy() const override { return 1.0; }

  double mup() const noexcept { return mup_; }
  double di() const noexcept { return di_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight_total() const noexcept { return weight_total_; }

private:
  double mup_;
  double di_;
  std::vector<double> weights_;
  double weight_total_ = 0.0;
};

} // namespace tbyb
