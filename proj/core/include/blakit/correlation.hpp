#pragma once

#include <cstddef>
#include <vector>

namespace blakit {

/// Real correlation sequence indexed by lag r = 0..N-1 (circular semantics).
/// Compact closed forms may carry fewer lags; `at` wraps the index.
struct CrossCorrelation {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t lag) const { return values[lag]; }
  double at_lag(std::size_t lag) const { return values[lag % values.size()]; }
};

}  // namespace blakit
