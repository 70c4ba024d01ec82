#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "blakit/dsp.hpp"
#include "blakit/sequences.hpp"
#include "blakit/waveform.hpp"

namespace blakit::io {

/// CSV record format: optional `# key=value` metadata lines (fs, period_len,
/// n_periods, discard_periods, class, gen_period), then a header row
/// `t,input,output` or `input,output`, then one row per sample. Values are
/// written with 17 significant digits so read(write(r)) is bit-exact.
WaveformRecord read_record(const std::filesystem::path& path);
void write_record(const std::filesystem::path& path, const WaveformRecord& record,
                  bool with_time_column = false);

/// Drop the leading discard periods and reshape the retained samples into
/// (n_periods x period_len) rows, input and output separately.
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
segment(const WaveformRecord& record);

/// Zero-order-hold upsampling: each sample repeated `factor` times.
std::vector<double> hold_upsample(std::span<const double> x, int factor);

/// Keep every factor-th sample starting at phase 0. Inverse of hold_upsample.
std::vector<double> decimate(std::span<const double> x, int factor);

/// Stepped-sine FRF table, CSV columns `freq_hz,mag_db,phase_deg`.
struct SteppedSineTable {
  std::vector<double> freq_hz;
  std::vector<double> mag_db;
  std::vector<double> phase_deg;
};

SteppedSineTable read_stepped_sine_frf(const std::filesystem::path& path);
void write_stepped_sine_frf(const std::filesystem::path& path, const SteppedSineTable& table);

/// Complex FRF interpolated onto target frequencies: linear in dB magnitude
/// and in unwrapped phase. Frequencies outside the table range throw
/// (no extrapolation); a non-monotone table throws.
dsp::cvector interpolate_frf(const SteppedSineTable& table,
                             std::span<const double> target_freq_hz);

/// One period as `index,value` rows plus a JSON metadata sidecar
/// (`<path>.json`) with class, length, levels, RMS and generation inputs.
void write_signal_csv(const std::filesystem::path& path, const seq::ExcitationSignal& signal,
                      std::uint64_t seed, const std::vector<int>& taps = {});

/// Write-to-temporary-then-rename, so partially written files never appear
/// under the final name.
void atomic_write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace blakit::io
