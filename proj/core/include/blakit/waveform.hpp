#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace blakit {

/// Multi-period input/output capture. The arrays hold
/// (discard_periods + n_periods) * period_len samples each; the leading
/// discard_periods periods are transient and dropped by segmentation.
struct WaveformRecord {
  std::vector<double> input;
  std::vector<double> output;
  double sample_rate_hz = 1.0;
  std::size_t period_len = 0;
  int n_periods = 0;
  int discard_periods = 0;

  // Optional provenance carried through CSV metadata: excitation class name
  // ("" = unknown) and the generator-rate period before zero-order hold
  // (0 = same as period_len).
  std::string signal_class;
  std::size_t generator_period = 0;

  std::size_t samples_declared() const {
    return (static_cast<std::size_t>(n_periods) +
            static_cast<std::size_t>(discard_periods)) * period_len;
  }
};

}  // namespace blakit
