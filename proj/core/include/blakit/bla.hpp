#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blakit/dsp.hpp"
#include "blakit/waveform.hpp"

namespace blakit::bla {

/// BLA estimate over the excited bins of the lower half-band (k <= N/2).
/// g_mean is the complex mean of the per-group FRFs; g_std_db is the standard
/// deviation across groups of the linear magnitudes |G_group|, expressed in
/// dB, present only when there are at least two groups.
struct BlaEstimate {
  std::vector<std::size_t> bins;
  std::vector<double> freq;
  dsp::cvector g_mean;
  std::vector<double> g_std_db;
  int groups = 0;
  std::size_t period_len = 0;
  double sample_rate_hz = 1.0;
  std::vector<std::size_t> excluded_bins;  // input power ~ 0, dropped and flagged
};

/// One group's FRF: the record spectra are averaged before division,
/// G[k] = (sum over the group of S_yu[k]) / (sum over the group of S_uu[k]),
/// each record contributing its per-period averaged spectra. Bins whose
/// summed input power falls below 1e-12 times the maximum are marked NaN.
dsp::cvector estimate_group(const std::vector<WaveformRecord>& records);

/// Mean/std across per-group FRFs, restricted to the excited-bin mask within
/// the lower half-band. Bins marked NaN in any group are excluded and flagged.
BlaEstimate combine_groups(const std::vector<dsp::cvector>& group_frfs,
                           const std::vector<bool>& excited_bins,
                           std::size_t period_len, double sample_rate_hz);

/// Full protocol: realizations split into groups of group_size (leftovers
/// dropped), one FRF per group, then combined. Throws when fewer realizations
/// than one group are supplied.
BlaEstimate estimate(const std::vector<WaveformRecord>& records,
                     const std::vector<bool>& excited_bins, int group_size = 4);

struct ScaledEstimate {
  BlaEstimate estimate;
  double factor = 1.0;
};

/// Least-squares magnitude alignment: the real factor minimizing
/// sum_k |G_ref[k] - a G[k]|^2, applied to the mean and (in dB) to the std.
/// g_ref must be aligned with estimate.bins.
ScaledEstimate scale_to_reference(const BlaEstimate& estimate,
                                  std::span<const dsp::cdouble> g_ref);

struct RatioView {
  std::vector<double> mag_db;     // 20 log10 |G_ref / G|
  std::vector<double> phase_deg;  // principal value of angle(G_ref) - angle(G)
  std::vector<std::size_t> excluded_bins;  // zero-magnitude estimate, NaN output
};

RatioView ratio_to_reference(const BlaEstimate& estimate,
                             std::span<const dsp::cdouble> g_ref);

/// Reference FRF of an FIR block: DFT of the zero-padded taps.
dsp::cvector frf_fir(std::span<const double> g, std::size_t n);

/// Convenience: pick the reference values at the estimate's bins.
dsp::cvector at_bins(const dsp::cvector& full, const std::vector<std::size_t>& bins);

}  // namespace blakit::bla
