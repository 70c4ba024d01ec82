#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blakit/bla.hpp"
#include "blakit/sequences.hpp"
#include "blakit/waveform_io.hpp"
#include "blakit/wiener.hpp"

namespace blakit::repro {

/// The four benchmark Wiener systems: FIR taps [1 0.7 0.3] (memory 3) or
/// [1 0.7 0.3 0.2 0.1 0.05] (memory 6), nonlinearity x^3 or x^3 + x^2.
struct TableSystem {
  std::string name;
  std::vector<double> g;
  wiener::Nonlinearity nonlinearity;
};

const std::vector<TableSystem>& table_systems();

/// Realization counts per class, group size 4. The binary-class counts are
/// pinned by the number of distinct maximal-length tap sets at the protocol
/// lengths: 16 of 18 for the DS base (order 7), all 16 for IRMLBS (order 8),
/// all 48 for MLBS (order 9).
struct ProtocolCounts {
  int ds = 16;
  int irmlbs = 16;
  int mlbs = 48;
  int rcs = 400;
  int wgn = 400;
  int group_size = 4;

  int count_for(seq::SignalClass cls) const;
};

/// FRF-comparison protocol counts for the clipper circuit.
ProtocolCounts clipper_counts();

/// Class order used throughout the outputs (matches the legend order).
const std::vector<seq::SignalClass>& protocol_classes();

/// Generator-rate period per class: 762 for DS/RCS/WGN, 511 MLBS, 510 IRMLBS.
std::size_t generator_period(seq::SignalClass cls);

/// Deterministic seed for a tagged sub-experiment of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

/// Paper-protocol realizations: unique LFSR tap sets for the binary-derived
/// classes, independent random draws for RCS/WGN.
std::vector<seq::ExcitationSignal> paper_realizations(seq::SignalClass cls, int count,
                                                      std::uint64_t seed,
                                                      int flatten_candidates = 32);

/// I.i.d. ensembles for statistical checks: DS from random binary bases,
/// IRMLBS as inverse-repeat of random odd-length bases, RCS/WGN as usual.
/// (The paper-protocol variant caps DS/IRMLBS at the available tap sets.)
std::vector<seq::ExcitationSignal> iid_realizations(seq::SignalClass cls, int count,
                                                    std::uint64_t seed);

/// RMS level at which the Gaussian BLA of a cubic Wiener system equals the
/// underlying linear response: 3 alpha2 rms^2 = 1.
double unit_gaussian_bla_rms(std::span<const double> g);

/// Excited-bin mask for estimation at the acquisition rate: class rule on the
/// bin index, restricted to the generator band k in [1, gen_period/2].
std::vector<bool> estimation_mask(seq::SignalClass cls, std::size_t period_len,
                                  std::size_t gen_period);

/// One result table in the estimator CSV layout.
struct BlaTable {
  std::vector<std::size_t> bins;
  std::vector<double> freq;
  std::vector<double> mag_bla_db;
  std::vector<double> std_db;   // NaN when fewer than two groups
  std::vector<double> mag_ref_db;
  std::vector<double> ratio_db;
  std::vector<double> phase_diff_deg;
  double scale_factor = 1.0;

  double mean_abs_ratio_db() const;
  double mean_abs_phase_deg() const;
};

void write_bla_table_csv(const std::filesystem::path& path, const BlaTable& table);

/// BLA comparison cell for one benchmark system and one excitation class
/// (the per-class data behind the magnitude/std and ratio views).
BlaTable bla_comparison_cell(int system_index, seq::SignalClass cls, std::uint64_t seed,
                             const ProtocolCounts& counts = {});

/// Clipper circuit simulation: first-order lowpass then hard clip, driven
/// through a zero-order hold.
struct ClipperSetup {
  double cutoff_hz = 1600.0;
  double acquisition_rate_hz = 200000.0;
  int oversample = 10;
  double clip_threshold = 0.6;
  int settle_periods = 3;
};

BlaTable clipper_cell(seq::SignalClass cls, double rms_level, std::uint64_t seed,
                      const ClipperSetup& setup = {},
                      const ProtocolCounts& counts = clipper_counts());

/// Shared estimation path for measured records (also used by the CLI):
/// estimate, then optionally scale/ratio against a stepped-sine reference.
BlaTable estimate_records(const std::vector<WaveformRecord>& records,
                          const std::optional<io::SteppedSineTable>& reference,
                          int group_size, seq::SignalClass cls, std::size_t gen_period);

/// Output bundles. Every file is derived deterministically from the seed.
void reproduce_bla_comparison(std::uint64_t seed, const std::filesystem::path& out_dir,
                              const ProtocolCounts& counts = {});
void reproduce_theorem_validation(std::uint64_t seed, const std::filesystem::path& out_dir,
                                  int instances = 1000);
void reproduce_clipper(double rms_level, std::uint64_t seed,
                       const std::filesystem::path& out_dir,
                       const ClipperSetup& setup = {},
                       const ProtocolCounts& counts = clipper_counts());
void reproduce_measurement_pipeline(double rms_level, std::uint64_t seed,
                                    const std::filesystem::path& out_dir,
                                    int instances_per_class = 8,
                                    const ClipperSetup& setup = {});

/// Gaussianity of each class at the output of System 2's linear block.
std::vector<std::pair<seq::SignalClass, double>> gaussianity_kl(
    std::uint64_t seed, const ProtocolCounts& counts = {});
void reproduce_gaussianity_table(std::uint64_t seed, const std::filesystem::path& out_dir,
                                 const ProtocolCounts& counts = {});

}  // namespace blakit::repro
